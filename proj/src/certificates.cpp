#include "qpi/certificates.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <tuple>
#include <stdexcept>

namespace qpi {

std::string to_string(const SymbolRef& s) { return to_string(s.spec()); }

RatFn FormalComb::coeff(const SymbolRef& s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? RatFn{} : it->second;
}

void FormalComb::add(const SymbolRef& s, const RatFn& c) {
    if (s.family != family_) throw MathError("mixed S and T symbols in one combination");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(s, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

FormalComb& FormalComb::add_scaled(const FormalComb& o, const RatFn& scale) {
    if (scale.is_zero()) return *this;
    for (const auto& [s, c] : o.terms_) add(s, c * scale);
    return *this;
}

std::string to_string(const FormalComb& f) {
    if (f.is_zero()) return "0";
    std::string out;
    for (const auto& [s, c] : f.terms()) {
        if (!out.empty()) out += " + ";
        out += "(" + to_string(c) + ")*" + to_string(s);
    }
    return out;
}

std::string to_string(const RelationInstance& r) {
    return std::string(r.family == Family::S ? "rel" : "relhat") + std::to_string(r.index) + "_{" +
           std::to_string(r.offset[0]) + "," + std::to_string(r.offset[1]) + "," + std::to_string(r.offset[2]) + "}";
}

// ---------------------------------------------------------------- templates

namespace {

enum OffsetVar { kNone = -1, kA = 0, kB = 1, kC = 2 };

// sign * x^xpow * q^(offset[qvar] + qconst) * F_{offset + shift}
struct RelTerm {
    std::array<int, 3> shift;
    int sign;
    int xpow;
    int qvar;
    int qconst;
};

using RelTemplate = std::vector<RelTerm>;

// Templates for the S family. The T family differs only in the power of x
// attached to a step in i: x^2 for S, x for T.
const std::array<RelTemplate, kRelationCount>& s_templates() {
    static const std::array<RelTemplate, kRelationCount> t{{
        {{{0, 0, 0}, 1, 0, kNone, 0}, {{2, 0, 0}, -1, 0, kNone, 0},
         {{3, 1, 1}, -1, 2, kA, 1}, {{4, 2, 2}, -1, 2, kA, 2}},
        {{{0, 0, 0}, 1, 0, kNone, 0}, {{0, 2, 0}, -1, 0, kNone, 0},
         {{1, 1, 1}, -1, 1, kB, 1}, {{2, 2, 2}, -1, 1, kB, 2}},
        {{{0, 0, 0}, 1, 0, kNone, 0}, {{0, 0, 2}, -1, 0, kNone, 0},
         {{1, 1, 1}, -1, 1, kC, 1}, {{2, 2, 2}, -1, 1, kC, 2}},
        {{{0, 0, 0}, 1, 0, kNone, 0}, {{1, 1, 1}, -1, 0, kNone, 0},
         {{3, 3, 3}, -1, 2, kA, 1}, {{1, 1, 3}, -1, 1, kB, 1}, {{1, 1, 1}, -1, 1, kC, 1}},
        {{{0, 0, 0}, 1, 0, kNone, 0}, {{1, 1, 1}, -1, 0, kNone, 0},
         {{3, 3, 3}, -1, 2, kA, 1}, {{1, 1, 1}, -1, 1, kB, 1}, {{1, 3, 1}, -1, 1, kC, 1}},
        {{{0, 0, 0}, 1, 0, kNone, 0}, {{1, 1, 1}, -1, 0, kNone, 0},
         {{3, 1, 3}, -1, 2, kA, 1}, {{3, 1, 3}, -1, 1, kB, 1}, {{1, 1, 1}, -1, 1, kC, 1}},
        {{{0, 0, 0}, 1, 0, kNone, 0}, {{1, 1, 1}, -1, 0, kNone, 0},
         {{3, 1, 1}, -1, 2, kA, 1}, {{3, 1, 3}, -1, 1, kB, 1}, {{3, 1, 1}, -1, 1, kC, 1}},
        {{{0, 0, 0}, 1, 0, kNone, 0}, {{1, 1, 1}, -1, 0, kNone, 0},
         {{3, 3, 1}, -1, 2, kA, 1}, {{1, 1, 1}, -1, 1, kB, 1}, {{3, 3, 1}, -1, 1, kC, 1}},
        {{{0, 0, 0}, 1, 0, kNone, 0}, {{1, 1, 1}, -1, 0, kNone, 0},
         {{3, 1, 1}, -1, 2, kA, 1}, {{3, 1, 1}, -1, 1, kB, 1}, {{3, 3, 1}, -1, 1, kC, 1}},
    }};
    return t;
}

}  // namespace

FormalComb expand_relation(const RelationInstance& inst, RelationTable table) {
    if (inst.index < 1 || inst.index > kRelationCount) throw MathError("relation index must be in 1..9");
    const auto& off = inst.offset;
    if (off[0] < 0 || off[1] < 0 || off[2] < 0) throw MathError("relation offsets must be non-negative");
    FormalComb comb(inst.family);
    const bool printed = table == RelationTable::AsPrinted;
    for (RelTerm t : s_templates()[static_cast<std::size_t>(inst.index - 1)]) {
        // The as-printed rel^2 / rel^3 carry two extra units on b (resp. c) in
        // their last two symbols.
        if (printed && inst.index == 2 && t.qvar == kB) t.shift[1] += 2;
        if (printed && inst.index == 3 && t.qvar == kC) t.shift[2] += 2;
        int xpow = t.xpow;
        if (inst.family == Family::T && xpow == 2) xpow = 1;
        const int qexp = (t.qvar == kNone ? 0 : off[static_cast<std::size_t>(t.qvar)]) + t.qconst;
        const SymbolRef sym{inst.family, off[0] + t.shift[0], off[1] + t.shift[1], off[2] + t.shift[2]};
        comb.add(sym, RatFn(PolyQX::monomial(t.sign, qexp, xpow)));
    }
    return comb;
}

TruncSeries evaluate_comb(const FormalComb& comb, MultisumEngine& engine) {
    TruncSeries acc(engine.order());
    for (const auto& [sym, c] : comb.terms()) {
        if (!c.is_polynomial()) throw MathError("series evaluation needs polynomial coefficients");
        acc += engine.eval(sym.spec()) * c.num();
    }
    return acc;
}

bool relation_series_check(const RelationInstance& inst, MultisumEngine& engine, RelationTable table) {
    return evaluate_comb(expand_relation(inst, table), engine).is_zero();
}

bool relation_series_check(const RelationInstance& inst, int order, RelationTable table) {
    MultisumEngine engine(order);
    return relation_series_check(inst, engine, table);
}

// ---------------------------------------------------------------- targets

TargetId parse_target_id(std::string_view id) {
    if (id == "proofA") return TargetId::ProofA;
    if (id == "proofB") return TargetId::ProofB;
    if (id == "proofC") return TargetId::ProofC;
    if (id == "proofD") return TargetId::ProofD;
    if (id == "proofE") return TargetId::ProofE;
    throw UnknownId(id);
}

std::string to_string(TargetId id) {
    switch (id) {
        case TargetId::ProofA: return "proofA";
        case TargetId::ProofB: return "proofB";
        case TargetId::ProofC: return "proofC";
        case TargetId::ProofD: return "proofD";
        case TargetId::ProofE: return "proofE";
    }
    return "?";
}

namespace {

FormalComb make_comb(Family f, std::initializer_list<std::pair<std::array<int, 3>, const char*>> terms) {
    FormalComb comb(f);
    for (const auto& [abc, coeff] : terms) comb.add(SymbolRef{f, abc[0], abc[1], abc[2]}, parse_ratfn(coeff));
    return comb;
}

}  // namespace

FormalComb target_comb(TargetId id) {
    switch (id) {
        case TargetId::ProofA:
            // (1+xq) S_{3,0,1} pushed through f(x) = (1+xq) f(xq) + xq(1+xq)(1+xq^2) f(xq^2),
            // with the common factor (1+xq) removed.
            return make_comb(Family::S, {
                {{3, 0, 1}, "1"},
                {{5, 1, 2}, "-(1 + x*q^2)"},
                {{7, 2, 3}, "-x*q*(1 + x*q^2)*(1 + x*q^3)"},
            });
        case TargetId::ProofB:
            // T_{1,0,1} + xq T_{3,1,2} pushed through the untangled Q1 equation.
            return make_comb(Family::T, {
                {{1, 0, 1}, "1"},
                {{3, 1, 2}, "x*q"},
                {{2, 1, 2}, "-(1 + x*q + x*q^2)"},
                {{4, 2, 3}, "-(1 + x*q + x*q^2)*x*q^2"},
                {{3, 2, 3}, "-x*q*(1 - q - x*q^3)"},
                {{5, 3, 4}, "-x*q*(1 - q - x*q^3)*x*q^3"},
                {{4, 3, 4}, "-x*q^2*(1 - x*q^2)"},
                {{6, 4, 5}, "-x*q^2*(1 - x*q^2)*x*q^4"},
            });
        case TargetId::ProofC:
            return make_comb(Family::S, {
                {{2, 0, 1}, "1"},
                {{4, 1, 2}, "-(1 + x*q)"},
                {{6, 2, 3}, "-x*q^2*(1 + x*q)*(1 + x*q^2)"},
            });
        case TargetId::ProofD:
            return make_comb(Family::T, {
                {{2, 0, 1}, "1"},
                {{3, 1, 2}, "-(1 + x*q + x*q^2)"},
                {{4, 2, 3}, "x^2*q^4"},
                {{5, 3, 4}, "-x*q^3*(1 - x*q^2)"},
            });
        case TargetId::ProofE:
            return make_comb(Family::T, {
                {{1, 0, 1}, "1"},
                {{3, 1, 2}, "q"},
                {{3, 0, 1}, "-(1 + q)"},
            });
    }
    throw UnknownId("?");
}

FormalComb target_comb(std::string_view id) { return target_comb(parse_target_id(id)); }

// ---------------------------------------------------------------- certificates

nlohmann::json Certificate::to_json() const {
    nlohmann::json tgt = nlohmann::json::array();
    for (const auto& [s, c] : target.terms()) tgt.push_back({{"symbol", {s.a, s.b, s.c}}, {"coeff", to_string(c)}});
    nlohmann::json ents = nlohmann::json::array();
    for (const auto& e : entries)
        ents.push_back({{"rel", e.relation.index},
                        {"offset", {e.relation.offset[0], e.relation.offset[1], e.relation.offset[2]}},
                        {"mult", to_string(e.multiplier)}});
    return {{"family", std::string(1, family_char(family))}, {"target", tgt}, {"entries", ents}};
}

Certificate Certificate::from_json(const nlohmann::json& j) {
    Certificate cert;
    cert.family = parse_family(j.at("family").get<std::string>());
    cert.target = FormalComb(cert.family);
    for (const auto& t : j.at("target")) {
        const auto abc = t.at("symbol").get<std::array<int, 3>>();
        cert.target.add(SymbolRef{cert.family, abc[0], abc[1], abc[2]}, parse_ratfn(t.at("coeff").get<std::string>()));
    }
    for (const auto& e : j.at("entries")) {
        RelationInstance inst{cert.family, e.at("rel").get<int>(), e.at("offset").get<std::array<int, 3>>()};
        if (inst.index < 1 || inst.index > kRelationCount) throw ParseError("relation index out of range");
        cert.entries.push_back({inst, parse_ratfn(e.at("mult").get<std::string>())});
    }
    return cert;
}

Certificate transcribed_proofD_certificate() {
    static const std::array<std::pair<RelationInstance, const char*>, 14> rows{{
        {{Family::T, 1, {2, 0, 1}}, "x*q/(q^2 + 1)"},
        {{Family::T, 1, {2, 0, 3}}, "-x*q"},
        {{Family::T, 2, {4, 0, 1}}, "x*q^3/((q - 1)*(q^2 + 1))"},
        {{Family::T, 2, {4, 0, 3}}, "-x*q^4/((q - 1)*(q^2 + 1))"},
        {{Family::T, 3, {4, 0, 1}}, "-x*q*(q^2 - q + 1)/((q - 1)*(q^2 + 1))"},
        {{Family::T, 3, {4, 2, 1}}, "x*q^3/((q - 1)*(q^2 + 1))"},
        {{Family::T, 6, {2, 0, 1}}, "-(q^5 - q^4 + 2*q^3 - 2*q^2 - q*x + q - 1)/((q - 1)*(q^2 + 1)^2)"},
        {{Family::T, 6, {3, 1, 2}}, "(q^4 - q^3 + 2*q^2 - 2*q + 1)*x*q^2/((q - 1)*(q^2 + 1)^2)"},
        {{Family::T, 8, {2, 0, 1}}, "-x*q^2/((q - 1)*(q^2 + 1)^2)"},
        {{Family::T, 8, {2, 0, 3}}, "-1"},
        {{Family::T, 8, {3, 1, 2}}, "-x*q^2/((q - 1)*(q^2 + 1)^2)"},
        {{Family::T, 9, {2, 0, 1}}, "-x*q^3/(q^2 + 1)^2"},
        {{Family::T, 9, {2, 0, 3}}, "1 + x*q"},
        {{Family::T, 9, {3, 1, 2}}, "-x*q^3/(q^2 + 1)^2"},
    }};
    Certificate cert;
    cert.family = Family::T;
    cert.target = target_comb(TargetId::ProofD);
    for (const auto& [inst, mult] : rows) cert.entries.push_back({inst, parse_ratfn(mult)});
    return cert;
}

FormalComb certificate_combination(const Certificate& cert, RelationTable table) {
    FormalComb sum(cert.family);
    for (const auto& e : cert.entries) {
        if (e.relation.family != cert.family) throw MathError("certificate mixes relation families");
        sum.add_scaled(expand_relation(e.relation, table), e.multiplier);
    }
    return sum;
}

bool verify_certificate(const Certificate& cert, RelationTable table) {
    if (cert.target.family() != cert.family) return false;
    for (const auto& e : cert.entries)
        if (e.relation.family != cert.family) return false;
    return certificate_combination(cert, table) == cert.target;
}

// ---------------------------------------------------------------- windows

std::string to_string(const Window& w) {
    auto range = [&](int i) {
        return std::to_string(w.lo[static_cast<std::size_t>(i)]) + ".." + std::to_string(w.hi[static_cast<std::size_t>(i)]);
    };
    return "{" + range(0) + "}x{" + range(1) + "}x{" + range(2) + "}";
}

Window default_window(const FormalComb& target, int growth) {
    Window w;
    w.lo = {std::numeric_limits<int>::max(), std::numeric_limits<int>::max(), std::numeric_limits<int>::max()};
    w.hi = {0, 0, 0};
    for (const auto& [s, c] : target.terms()) {
        const std::array<int, 3> abc{s.a, s.b, s.c};
        for (std::size_t i = 0; i < 3; ++i) {
            w.lo[i] = std::min(w.lo[i], abc[i]);
            w.hi[i] = std::max(w.hi[i], abc[i]);
        }
    }
    if (target.is_zero()) w.lo = {0, 0, 0};
    for (std::size_t i = 0; i < 3; ++i) {
        w.lo[i] = std::max(0, w.lo[i] - kMaxRelationShift - growth);
        w.hi[i] += kMaxRelationShift + growth;
    }
    return w;
}

// ---------------------------------------------------------------- solver

namespace {

// Arithmetic modulo the Mersenne prime 2^61 - 1. Only used to choose which
// relations enter a certificate; the multipliers themselves are exact.
constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + b;
    return s >= kPrime ? s - kPrime : s;
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kPrime - b; }

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 t = static_cast<unsigned __int128>(a) * b;
    std::uint64_t r = static_cast<std::uint64_t>(t & kPrime) + static_cast<std::uint64_t>(t >> 61);
    return r >= kPrime ? r - kPrime : r;
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    for (; e; e >>= 1, b = mul_mod(b, b))
        if (e & 1) r = mul_mod(r, b);
    return r;
}

std::uint64_t inv_mod(std::uint64_t a) { return pow_mod(a, kPrime - 2); }

std::uint64_t reduce_int(const BigInt& z) {
    static const BigInt p = [] {
        BigInt v;
        mpz_set_ui(v.get_mpz_t(), kPrime);
        return v;
    }();
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), z.get_mpz_t(), p.get_mpz_t());
    return mpz_get_ui(r.get_mpz_t());
}

struct EvalPoint {
    std::uint64_t q;
    std::uint64_t x;
};

// nullopt when a denominator vanishes at the point.
std::optional<std::uint64_t> eval_mod(const PolyQX& p, const EvalPoint& pt) {
    std::uint64_t acc = 0;
    for (const auto& [m, c] : p.terms()) {
        const std::uint64_t den = reduce_int(c.get_den());
        if (den == 0) return std::nullopt;
        std::uint64_t v = mul_mod(reduce_int(c.get_num()), inv_mod(den));
        v = mul_mod(v, mul_mod(pow_mod(pt.q, static_cast<std::uint64_t>(m.q)), pow_mod(pt.x, static_cast<std::uint64_t>(m.x))));
        acc = add_mod(acc, v);
    }
    return acc;
}

std::optional<std::uint64_t> eval_mod(const RatFn& r, const EvalPoint& pt) {
    const auto n = eval_mod(r.num(), pt);
    const auto d = eval_mod(r.den(), pt);
    if (!n || !d || *d == 0) return std::nullopt;
    return mul_mod(*n, inv_mod(*d));
}

struct LinearSystem {
    std::vector<RelationInstance> columns;
    std::vector<FormalComb> expanded;
    std::map<SymbolRef, int> row_of;
};

// Rows are ordered by a+b+c, then lexicographically. Every relation shift
// other than the offset itself raises a+b+c, so the offset symbol is always
// the smallest row of its column.
LinearSystem build_system(const FormalComb& target, const Window& w) {
    LinearSystem sys;
    for (int a = w.lo[0]; a <= w.hi[0]; ++a)
        for (int b = w.lo[1]; b <= w.hi[1]; ++b)
            for (int c = w.lo[2]; c <= w.hi[2]; ++c)
                for (int idx = 1; idx <= kRelationCount; ++idx) {
                    RelationInstance inst{target.family(), idx, {a, b, c}};
                    sys.expanded.push_back(expand_relation(inst));
                    sys.columns.push_back(inst);
                }
    std::vector<SymbolRef> syms;
    for (const auto& comb : sys.expanded)
        for (const auto& [s, c] : comb.terms()) syms.push_back(s);
    for (const auto& [s, c] : target.terms()) syms.push_back(s);
    auto key = [](const SymbolRef& s) { return std::tuple(s.a + s.b + s.c, s.a, s.b, s.c); };
    std::sort(syms.begin(), syms.end(), [&](const SymbolRef& x, const SymbolRef& y) { return key(x) < key(y); });
    syms.erase(std::unique(syms.begin(), syms.end()), syms.end());
    for (std::size_t r = 0; r < syms.size(); ++r) sys.row_of.emplace(syms[r], static_cast<int>(r));
    return sys;
}

using ModVec = std::map<int, std::uint64_t>;

std::optional<ModVec> to_mod(const FormalComb& comb, const LinearSystem& sys, const EvalPoint& pt) {
    ModVec v;
    for (const auto& [s, c] : comb.terms()) {
        const auto e = eval_mod(c, pt);
        if (!e) return std::nullopt;
        if (*e != 0) v.emplace(sys.row_of.at(s), *e);
    }
    return v;
}

// Sparse echelon basis over GF(p); each vector is scaled so that its smallest
// row (the pivot) holds 1.
class ModBasis {
public:
    using Trace = std::vector<std::pair<std::size_t, std::uint64_t>>;

    std::size_t size() const { return vecs_.size(); }

    // Subtracts basis multiples until no entry of v sits on a pivot row.
    void reduce(ModVec& v, Trace* trace) const {
        for (auto it = v.begin(); it != v.end();) {
            const auto p = pivots_.find(it->first);
            if (p == pivots_.end()) {
                ++it;
                continue;
            }
            const std::uint64_t f = it->second;
            for (const auto& [r, val] : vecs_[p->second]) {
                if (r == it->first) continue;
                auto slot = v.try_emplace(r, 0).first;
                slot->second = sub_mod(slot->second, mul_mod(f, val));
                if (slot->second == 0) v.erase(slot);
            }
            if (trace) trace->emplace_back(p->second, f);
            it = v.erase(it);
        }
    }

    // Adds a reduced nonzero vector; returns the scale applied to it.
    std::uint64_t insert(ModVec v) {
        const std::uint64_t inv = inv_mod(v.begin()->second);
        for (auto& [r, val] : v) val = mul_mod(val, inv);
        pivots_.emplace(v.begin()->first, vecs_.size());
        vecs_.push_back(std::move(v));
        return inv;
    }

private:
    std::vector<ModVec> vecs_;
    std::map<int, std::size_t> pivots_;
};

struct ModColumns {
    std::vector<ModVec> cols;
    ModVec target;
};

std::optional<ModColumns> evaluate_system(const LinearSystem& sys, const FormalComb& target, const EvalPoint& pt) {
    ModColumns m;
    auto t = to_mod(target, sys, pt);
    if (!t) return std::nullopt;
    m.target = std::move(*t);
    for (const auto& comb : sys.expanded) {
        auto v = to_mod(comb, sys, pt);
        if (!v) return std::nullopt;
        m.cols.push_back(std::move(*v));
    }
    return m;
}

bool target_in_span(const ModColumns& m, const std::vector<std::size_t>& subset) {
    ModBasis basis;
    for (std::size_t c : subset) {
        ModVec v = m.cols[c];
        basis.reduce(v, nullptr);
        if (!v.empty()) basis.insert(std::move(v));
    }
    ModVec t = m.target;
    basis.reduce(t, nullptr);
    return t.empty();
}

// Columns are fed in order until the target enters their span. The columns
// with a nonzero coefficient in the expansion over that prefix are then
// pruned greedily, last first, while the target stays in their span. The
// result is inclusion-minimal, hence linearly independent. nullopt means the
// target is outside the span of all columns.
std::optional<std::vector<std::size_t>> modular_support(const ModColumns& m) {
    if (m.target.empty()) return std::vector<std::size_t>{};

    ModBasis basis;
    std::vector<std::size_t> basis_col;
    std::vector<std::uint64_t> basis_scale;
    std::vector<ModBasis::Trace> basis_trace;  // scale * (column - sum f * basis[s])

    for (std::size_t col = 0; col < m.cols.size(); ++col) {
        ModVec v = m.cols[col];
        ModBasis::Trace trace;
        basis.reduce(v, &trace);
        if (v.empty()) continue;
        basis_scale.push_back(basis.insert(std::move(v)));
        basis_col.push_back(col);
        basis_trace.push_back(std::move(trace));

        ModVec t = m.target;
        ModBasis::Trace tt;
        basis.reduce(t, &tt);
        if (!t.empty()) continue;

        std::vector<std::uint64_t> w(basis.size(), 0);
        for (const auto& [s, f] : tt) w[s] = add_mod(w[s], f);
        std::vector<std::size_t> support;
        for (std::size_t t_idx = basis.size(); t_idx-- > 0;) {
            if (w[t_idx] == 0) continue;
            support.push_back(basis_col[t_idx]);
            const std::uint64_t k = mul_mod(w[t_idx], basis_scale[t_idx]);
            for (const auto& [s, f] : basis_trace[t_idx]) w[s] = sub_mod(w[s], mul_mod(k, f));
        }
        std::sort(support.begin(), support.end());

        for (std::size_t i = support.size(); i-- > 0;) {
            std::vector<std::size_t> rest = support;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
            if (target_in_span(m, rest)) support = std::move(rest);
        }
        return support;
    }
    return std::nullopt;
}

// Markowitz-ordered Gauss-Jordan elimination over Q(q,x) on the chosen
// columns. Returns nullopt if the subsystem turns out inconsistent.
std::optional<std::vector<RatFn>> exact_solve(const LinearSystem& sys, const std::vector<std::size_t>& support,
                                              const FormalComb& target) {
    std::map<SymbolRef, int> local_row;
    for (std::size_t k = 0; k < support.size(); ++k)
        for (const auto& [s, c] : sys.expanded[support[k]].terms()) local_row.emplace(s, 0);
    for (const auto& [s, c] : target.terms()) local_row.emplace(s, 0);
    int r = 0;
    for (auto& [s, idx] : local_row) idx = r++;

    const std::size_t nrows = local_row.size();
    std::vector<std::map<std::size_t, RatFn>> rows(nrows);
    std::vector<RatFn> rhs(nrows);
    for (std::size_t k = 0; k < support.size(); ++k)
        for (const auto& [s, c] : sys.expanded[support[k]].terms())
            rows[static_cast<std::size_t>(local_row.at(s))].emplace(k, c);
    for (const auto& [s, c] : target.terms()) rhs[static_cast<std::size_t>(local_row.at(s))] = c;

    auto weight = [](const RatFn& v) { return v.num().size() + v.den().size(); };

    std::vector<bool> row_used(nrows, false), col_done(support.size(), false);
    std::vector<std::size_t> pivot_row(support.size(), nrows);
    for (std::size_t step = 0; step < support.size(); ++step) {
        std::vector<std::size_t> col_count(support.size(), 0);
        for (std::size_t i = 0; i < nrows; ++i)
            if (!row_used[i])
                for (const auto& [k, v] : rows[i]) ++col_count[k];
        std::size_t best_row = nrows, best_col = 0;
        std::size_t best_cost = std::numeric_limits<std::size_t>::max(), best_weight = 0;
        for (std::size_t i = 0; i < nrows; ++i) {
            if (row_used[i]) continue;
            for (const auto& [k, v] : rows[i]) {
                if (col_done[k]) continue;
                const std::size_t cost = (rows[i].size() - 1) * (col_count[k] - 1);
                const std::size_t wgt = weight(v);
                if (cost < best_cost || (cost == best_cost && wgt < best_weight)) {
                    best_cost = cost;
                    best_weight = wgt;
                    best_row = i;
                    best_col = k;
                }
            }
        }
        if (best_row == nrows) break;  // remaining columns are free
        row_used[best_row] = true;
        col_done[best_col] = true;
        pivot_row[best_col] = best_row;

        const RatFn inv = RatFn(1) / rows[best_row].at(best_col);
        for (auto& [k, v] : rows[best_row]) v = v * inv;
        rhs[best_row] = rhs[best_row] * inv;
        const auto prow = rows[best_row];
        const RatFn prhs = rhs[best_row];
        for (std::size_t i = 0; i < nrows; ++i) {
            if (i == best_row) continue;
            auto it = rows[i].find(best_col);
            if (it == rows[i].end()) continue;
            const RatFn f = it->second;
            for (const auto& [k, v] : prow) {
                RatFn nv = rows[i].count(k) ? rows[i].at(k) - f * v : -(f * v);
                if (nv.is_zero())
                    rows[i].erase(k);
                else
                    rows[i][k] = std::move(nv);
            }
            if (!prhs.is_zero()) rhs[i] = rhs[i] - f * prhs;
        }
    }
    for (std::size_t i = 0; i < nrows; ++i)
        if (!row_used[i] && (!rows[i].empty() || !rhs[i].is_zero())) return std::nullopt;

    std::vector<RatFn> solution(support.size());
    for (std::size_t k = 0; k < support.size(); ++k) {
        if (pivot_row[k] == nrows) continue;
        const auto& row = rows[pivot_row[k]];
        if (row.size() != 1) return std::nullopt;  // free column left in a pivot row
        solution[k] = rhs[pivot_row[k]];
    }
    return solution;
}

}  // namespace

Certificate find_certificate(const FormalComb& target, const Window& window, SolverStats* stats) {
    Certificate cert;
    cert.family = target.family();
    cert.target = target;
    if (stats) {
        stats->window = window;
        ++stats->windows_tried;
    }
    if (target.is_zero()) return cert;

    const LinearSystem sys = build_system(target, window);
    if (stats) {
        stats->columns = sys.columns.size();
        stats->rows = sys.row_of.size();
    }

    std::mt19937_64 rng(0x5eed1234abcdULL);
    std::uniform_int_distribution<std::uint64_t> dist(2, kPrime - 1);
    constexpr int kAttempts = 4;
    int outside_span = 0;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        const EvalPoint pt{dist(rng), dist(rng)};
        const auto mod = evaluate_system(sys, target, pt);
        if (!mod) continue;  // a denominator vanished at this point
        const auto support = modular_support(*mod);
        if (!support) {
            // One more point guards against a rank drop at an unlucky point.
            if (++outside_span < 2) continue;
            throw NoCertificateInWindow("target is not in the span of the relations in window " + to_string(window));
        }
        const auto solution = exact_solve(sys, *support, target);
        if (!solution) continue;
        cert.entries.clear();
        for (std::size_t k = 0; k < support->size(); ++k)
            if (!(*solution)[k].is_zero()) cert.entries.push_back({sys.columns[(*support)[k]], (*solution)[k]});
        if (verify_certificate(cert)) {
            if (stats) stats->support = cert.entries.size();
            return cert;
        }
    }
    throw NoCertificateInWindow("no verified certificate found in window " + to_string(window));
}

Certificate find_certificate(const FormalComb& target, int max_retries, SolverStats* stats) {
    for (int growth = 0;; ++growth) {
        try {
            return find_certificate(target, default_window(target, growth), stats);
        } catch (const NoCertificateInWindow&) {
            if (growth >= max_retries) throw;
        }
    }
}

}  // namespace qpi
