#include "qpi/qseries.hpp"

#include <algorithm>
#include <cassert>

namespace qpi {

namespace {

const PolyX kZeroPoly{};

// Multiply s in place by 1/(1 - q^k), i.e. b_n += b_{n-k} ascending.
void mul_geometric(TruncSeries& s, int k) {
    for (int n = k; n <= s.order(); ++n) {
        const PolyX prev = s.coeff(n - k);
        if (!prev.is_zero()) s.add_to(n, prev);
    }
}

// Multiply s in place by (1 - q^k).
void mul_one_minus(TruncSeries& s, int k) {
    for (int n = s.order(); n >= k; --n) {
        const PolyX prev = s.coeff(n - k);
        if (!prev.is_zero()) s.add_to(n, -prev);
    }
}

}  // namespace

TruncSeries::TruncSeries(int order) : order_(order), c_(static_cast<std::size_t>(std::max(order, -1) + 1)) {
    if (order < 0) throw MathError("negative truncation order");
}

TruncSeries TruncSeries::one(int order) {
    TruncSeries s(order);
    s.c_[0] = PolyX(1);
    return s;
}

TruncSeries TruncSeries::from_poly(const PolyQX& p, int order) {
    TruncSeries s(order);
    for (const auto& [m, c] : p.terms())
        if (m.q <= order) s.c_[static_cast<std::size_t>(m.q)].add_term(m.x, c);
    return s;
}

TruncSeries TruncSeries::with_x_cap(int cap) const {
    TruncSeries s = *this;
    s.xcap_ = xcap_ ? std::min(*xcap_, cap) : cap;
    for (auto& p : s.c_) s.cap(p);
    return s;
}

void TruncSeries::cap(PolyX& p) const {
    if (!xcap_ || p.degree() <= *xcap_) return;
    std::vector<BigRat> c(p.coeffs().begin(), p.coeffs().begin() + *xcap_ + 1);
    p = PolyX(std::move(c));
}

const PolyX& TruncSeries::coeff(int n) const {
    if (n < 0 || n > order_) return kZeroPoly;
    return c_[static_cast<std::size_t>(n)];
}

BigRat TruncSeries::coeff(int n, int m) const { return coeff(n)[m]; }

void TruncSeries::add_to(int n, const PolyX& p) {
    if (n < 0 || n > order_) return;
    auto& slot = c_[static_cast<std::size_t>(n)];
    slot += p;
    cap(slot);
}

void TruncSeries::add_to(int n, int m, const BigRat& c) {
    if (n < 0 || n > order_ || (xcap_ && m > *xcap_)) return;
    c_[static_cast<std::size_t>(n)].add_term(m, c);
}

bool TruncSeries::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const PolyX& p) { return p.is_zero(); });
}

bool TruncSeries::is_x_free() const {
    return std::all_of(c_.begin(), c_.end(), [](const PolyX& p) { return p.degree() <= 0; });
}

TruncSeries TruncSeries::operator-() const {
    TruncSeries s = *this;
    for (auto& p : s.c_) p = -p;
    return s;
}

namespace {

std::optional<int> merge_cap(std::optional<int> a, std::optional<int> b) {
    if (a && b) return std::min(*a, *b);
    return a ? a : b;
}

}  // namespace

TruncSeries& TruncSeries::operator+=(const TruncSeries& o) {
    if (o.order_ < order_) *this = truncated(o.order_);
    xcap_ = merge_cap(xcap_, o.xcap_);
    for (int n = 0; n <= order_; ++n) add_to(n, o.c_[static_cast<std::size_t>(n)]);
    return *this;
}

TruncSeries& TruncSeries::operator-=(const TruncSeries& o) { return *this += -o; }

TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
    TruncSeries r(std::min(a.order_, b.order_));
    r.xcap_ = merge_cap(a.xcap_, b.xcap_);
    for (int i = 0; i <= r.order_; ++i) {
        const PolyX& ai = a.c_[static_cast<std::size_t>(i)];
        if (ai.is_zero()) continue;
        for (int j = 0; i + j <= r.order_; ++j) {
            const PolyX& bj = b.c_[static_cast<std::size_t>(j)];
            if (bj.is_zero()) continue;
            r.add_to(i + j, ai * bj);
        }
    }
    return r;
}

TruncSeries operator*(const TruncSeries& a, const PolyQX& p) {
    TruncSeries r(a.order_);
    r.xcap_ = a.xcap_;
    for (const auto& [m, c] : p.terms()) {
        for (int n = 0; n + m.q <= a.order_; ++n) {
            const PolyX& an = a.c_[static_cast<std::size_t>(n)];
            if (an.is_zero()) continue;
            r.add_to(n + m.q, an.shifted(m.x) * c);
        }
    }
    return r;
}

TruncSeries operator*(TruncSeries a, const BigRat& s) {
    for (auto& p : a.c_) p *= s;
    return a;
}

std::optional<CoeffPos> first_difference(const TruncSeries& a, const TruncSeries& b) {
    const int order = std::min(a.order_, b.order_);
    for (int n = 0; n <= order; ++n) {
        const PolyX& pa = a.c_[static_cast<std::size_t>(n)];
        const PolyX& pb = b.c_[static_cast<std::size_t>(n)];
        if (pa == pb) continue;
        const int top = std::max(pa.degree(), pb.degree());
        for (int m = 0; m <= top; ++m)
            if (pa[m] != pb[m]) return CoeffPos{n, m};
    }
    return std::nullopt;
}

TruncSeries TruncSeries::substitute_x(int k) const {
    assert(k >= 0);
    if (k == 0) return *this;
    TruncSeries r(order_);
    r.xcap_ = xcap_;
    for (int n = 0; n <= order_; ++n) {
        const PolyX& p = c_[static_cast<std::size_t>(n)];
        for (int m = 0; m <= p.degree() && n + k * m <= order_; ++m)
            if (p[m] != 0) r.add_to(n + k * m, m, p[m]);
    }
    return r;
}

TruncSeries TruncSeries::eval_x(const BigRat& value) const {
    TruncSeries r(order_);
    for (int n = 0; n <= order_; ++n) r.c_[static_cast<std::size_t>(n)] = PolyX(c_[static_cast<std::size_t>(n)].eval(value));
    return r;
}

TruncSeries TruncSeries::truncated(int order) const {
    if (order >= order_) return *this;
    TruncSeries r(order);
    r.xcap_ = xcap_;
    std::copy(c_.begin(), c_.begin() + order + 1, r.c_.begin());
    return r;
}

nlohmann::json TruncSeries::to_json() const {
    nlohmann::json coeffs = nlohmann::json::array();
    for (int n = 0; n <= order_; ++n) {
        const PolyX& p = c_[static_cast<std::size_t>(n)];
        if (!p.is_zero()) coeffs.push_back({{"qexp", n}, {"poly", to_string(p, 'x')}});
    }
    return {{"order", order_}, {"coeffs", coeffs}};
}

TruncSeries TruncSeries::from_json(const nlohmann::json& j) {
    TruncSeries s(j.at("order").get<int>());
    for (const auto& entry : j.at("coeffs")) {
        const int n = entry.at("qexp").get<int>();
        const PolyQX p = parse_poly(entry.at("poly").get<std::string>());
        if (p.degree_q() > 0) throw ParseError("series coefficient must be q-free");
        for (const auto& [m, c] : p.terms()) s.add_to(n, m.x, c);
    }
    return s;
}

std::string to_string(const TruncSeries& s) {
    std::string out;
    for (int n = 0; n <= s.order(); ++n) {
        const PolyX& c = s.coeff(n);
        if (c.is_zero()) continue;
        PolyQX term, cx;
        int nonzero = 0;
        for (int m = 0; m <= c.degree(); ++m) {
            if (c[m] == 0) continue;
            ++nonzero;
            term.add_term(Monomial{n, m}, c[m]);
            cx.add_term(Monomial{0, m}, c[m]);
        }
        std::string t = nonzero == 1 || n == 0 ? to_string(term)
                                               : "(" + to_string(cx) + ")*" + to_string(PolyQX::q(n));
        if (out.empty()) {
            out = t;
        } else if (t.front() == '-') {
            out += " - " + t.substr(1);
        } else {
            out += " + " + t;
        }
    }
    if (out.empty()) out = "0";
    return out + " + O(q^" + std::to_string(s.order() + 1) + ")";
}

TruncSeries invert(const TruncSeries& a) {
    const PolyX& a0 = a.coeff(0);
    if (a0.degree() != 0) throw NonUnitConstantTerm();
    const BigRat inv0 = 1 / a0[0];
    TruncSeries b(a.order());
    if (a.x_cap()) b = b.with_x_cap(*a.x_cap());
    b.add_to(0, PolyX(inv0));
    for (int n = 1; n <= a.order(); ++n) {
        PolyX acc;
        for (int k = 1; k <= n; ++k) {
            const PolyX& ak = a.coeff(k);
            if (ak.is_zero() || b.coeff(n - k).is_zero()) continue;
            acc += ak * b.coeff(n - k);
        }
        b.add_to(n, acc * (-inv0));
    }
    return b;
}

TruncSeries pochhammer(const PochSpec& spec, int order) {
    if (spec.base < 1) throw MathError("Pochhammer base exponent must be >= 1");
    if (!spec.length && spec.qexp < 1) throw DivergentInfiniteProduct();
    TruncSeries s = TruncSeries::one(order);
    for (int j = 0; !spec.length || j < *spec.length; ++j) {
        const int e = spec.qexp + spec.base * j;
        if (e > order) {
            if (!spec.length) break;
            continue;  // factor is 1 + O(q^{order+1})
        }
        // s *= (1 - sign x^xexp q^e)
        s = s + s * PolyQX::monomial(-spec.sign, e, spec.xexp);
    }
    return s;
}

TruncSeries poch_q(int qexp, int base, int order) {
    return pochhammer(PochSpec{1, 0, qexp, base, std::nullopt}, order);
}

TruncSeries product_side(int theorem, int order) {
    if (theorem != 1 && theorem != 2) throw MathError("theorem must be 1 or 2");
    const int r = theorem == 1 ? 1 : 2;
    TruncSeries den = poch_q(1, 2, order) * poch_q(r, 5, order) * poch_q(5 - r, 5, order);
    return invert(den);
}

TruncSeries pair_gf(PairVariant variant, int order) {
    const TruncSeries distinct = pochhammer(PochSpec{-1, 1, 1, 1, std::nullopt}, order);
    TruncSeries sum(order);
    // inv_poch holds 1/(q;q)_n, updated incrementally.
    TruncSeries inv_poch = TruncSeries::one(order);
    for (int n = 0;; ++n) {
        if (n > 0) mul_geometric(inv_poch, n);
        const int e = n * n + (variant == PairVariant::RR2 ? n : 0);
        if (e > order) break;
        sum += inv_poch * PolyQX::monomial(1, e, n);
    }
    return distinct * sum;
}

std::map<int, BigRat> euler_factorize(const TruncSeries& s) {
    if (s.coeff(0) != PolyX(1)) throw NonUnitConstantTerm();
    if (!s.is_x_free()) throw MathError("euler_factorize needs an x-free series");
    const int order = s.order();
    // q s'/s has coefficients c_n = sum_{k | n} k e_k.
    TruncSeries deriv(order);
    for (int n = 1; n <= order; ++n) deriv.add_to(n, 0, s.coeff(n, 0) * n);
    const TruncSeries logd = deriv * invert(s);
    std::vector<BigRat> e(static_cast<std::size_t>(order) + 1);
    std::map<int, BigRat> out;
    for (int n = 1; n <= order; ++n) {
        BigRat acc = logd.coeff(n, 0);
        for (int d = 1; d < n; ++d)
            if (n % d == 0) acc -= d * e[static_cast<std::size_t>(d)];
        e[static_cast<std::size_t>(n)] = acc / n;
        if (e[static_cast<std::size_t>(n)] != 0) out.emplace(n, e[static_cast<std::size_t>(n)]);
    }
    return out;
}

TruncSeries euler_reconstruct(const std::map<int, BigRat>& exponents, int order) {
    const bool integral = std::all_of(exponents.begin(), exponents.end(),
                                      [](const auto& kv) { return kv.second.get_den() == 1; });
    if (integral) {
        TruncSeries s = TruncSeries::one(order);
        for (const auto& [k, e] : exponents) {
            if (k > order) continue;
            const long times = BigInt(abs(e.get_num())).get_si();
            for (long t = 0; t < times; ++t) {
                if (e > 0)
                    mul_geometric(s, k);
                else
                    mul_one_minus(s, k);
            }
        }
        return s;
    }
    // Rational exponents: n s_n = sum_{j=1..n} c_j s_{n-j}, c_j = sum_{k|j} k e_k.
    std::vector<BigRat> c(static_cast<std::size_t>(order) + 1, BigRat(0));
    for (const auto& [k, e] : exponents)
        for (int j = k; j <= order; j += k) c[static_cast<std::size_t>(j)] += k * e;
    std::vector<BigRat> v(static_cast<std::size_t>(order) + 1, BigRat(0));
    v[0] = 1;
    for (int n = 1; n <= order; ++n) {
        BigRat acc = 0;
        for (int j = 1; j <= n; ++j) acc += c[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(n - j)];
        v[static_cast<std::size_t>(n)] = acc / n;
    }
    TruncSeries s(order);
    for (int n = 0; n <= order; ++n) s.add_to(n, 0, v[static_cast<std::size_t>(n)]);
    return s;
}

FuncEqSpec funceq_rr1() {
    const PolyQX one(1), xq = PolyQX::monomial(1, 1, 1), xq2 = PolyQX::monomial(1, 2, 1);
    return {
        {one, 0, 0},
        {-(one + xq), 1, 0},
        {-(xq * (one + xq) * (one + xq2)), 2, 0},
    };
}

FuncEqSpec funceq_rr2() {
    const PolyQX one(1), xq = PolyQX::monomial(1, 1, 1), xq2 = PolyQX::monomial(1, 2, 1);
    return {
        {one, 0, 0},
        {-(one + xq), 1, 0},
        {-(xq2 * (one + xq) * (one + xq2)), 2, 0},
    };
}

TruncSeries funceq_residual(std::span<const TruncSeries> unknowns, const FuncEqSpec& eq) {
    if (unknowns.empty()) throw MathError("functional equation needs at least one series");
    const int order = unknowns.front().order();
    for (const auto& s : unknowns)
        if (s.order() != order) throw OrderMismatch();
    TruncSeries residual(order);
    for (const auto& t : eq) {
        if (t.unknown < 0 || static_cast<std::size_t>(t.unknown) >= unknowns.size())
            throw MathError("functional equation references a missing series");
        residual += unknowns[static_cast<std::size_t>(t.unknown)].substitute_x(t.shift) * t.multiplier;
    }
    return residual;
}

bool funceq_check(const TruncSeries& s, const FuncEqSpec& eq) {
    return funceq_residual(std::span<const TruncSeries>(&s, 1), eq).is_zero();
}

bool funceq_check(std::span<const TruncSeries> unknowns, const FuncEqSpec& eq) {
    return funceq_residual(unknowns, eq).is_zero();
}

}  // namespace qpi
