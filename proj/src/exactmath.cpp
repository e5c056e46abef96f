#include "qpi/exactmath.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace qpi {

namespace {

const BigRat kZero{0};

}  // namespace

BigRat parse_rational(std::string_view text) {
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }),
            s.end());
    if (s.empty()) throw ParseError("empty rational");
    BigRat r;
    if (r.set_str(s, 10) != 0) throw ParseError("bad rational: " + s);
    if (r.get_den() == 0) throw DivideByZero();
    r.canonicalize();
    return r;
}

std::string to_string(const BigRat& r) { return r.get_str(10); }

// ---------------------------------------------------------------- UPoly

UPoly::UPoly(BigRat constant) {
    if (constant != 0) c_.push_back(std::move(constant));
}

UPoly::UPoly(std::vector<BigRat> coeffs) : c_(std::move(coeffs)) { trim(); }

UPoly UPoly::monomial(BigRat c, int exponent) {
    UPoly p;
    if (c == 0) return p;
    p.c_.assign(static_cast<std::size_t>(exponent) + 1, kZero);
    p.c_.back() = std::move(c);
    return p;
}

const BigRat& UPoly::operator[](int e) const {
    if (e < 0 || e > degree()) return kZero;
    return c_[static_cast<std::size_t>(e)];
}

void UPoly::add_term(int e, const BigRat& c) {
    if (c == 0) return;
    if (e > degree()) c_.resize(static_cast<std::size_t>(e) + 1, kZero);
    c_[static_cast<std::size_t>(e)] += c;
    trim();
}

void UPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

UPoly UPoly::operator-() const {
    UPoly r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
}

UPoly& UPoly::operator+=(const UPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), kZero);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

UPoly& UPoly::operator-=(const UPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), kZero);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
}

UPoly& UPoly::operator*=(const BigRat& s) {
    if (s == 0) {
        c_.clear();
        return *this;
    }
    for (auto& v : c_) v *= s;
    return *this;
}

UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<BigRat> r(a.c_.size() + b.c_.size() - 1, kZero);
    BigRat t;
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) {
            if (b.c_[j] == 0) continue;
            mpq_mul(t.get_mpq_t(), a.c_[i].get_mpq_t(), b.c_[j].get_mpq_t());
            r[i + j] += t;
        }
    }
    return UPoly(std::move(r));
}

UPoly UPoly::shifted(int k) const {
    if (is_zero() || k == 0) return *this;
    UPoly r;
    r.c_.assign(static_cast<std::size_t>(k), kZero);
    r.c_.insert(r.c_.end(), c_.begin(), c_.end());
    return r;
}

BigRat UPoly::eval(const BigRat& t) const {
    BigRat acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
}

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw DivideByZero();
    std::vector<BigRat> rem = a.coeffs();
    const int db = b.degree();
    if (a.degree() < db) return {UPoly{}, a};
    std::vector<BigRat> quo(static_cast<std::size_t>(a.degree() - db) + 1, kZero);
    const BigRat inv_lead = 1 / b.leading();
    for (int k = a.degree(); k >= db; --k) {
        const BigRat& top = rem[static_cast<std::size_t>(k)];
        if (top == 0) continue;
        BigRat f = top * inv_lead;
        for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k - db + j)] -= f * b[j];
        quo[static_cast<std::size_t>(k - db)] = std::move(f);
    }
    return {UPoly(std::move(quo)), UPoly(std::move(rem))};
}

UPoly exact_div(const UPoly& a, const UPoly& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw NotDivisible();
    return q;
}

namespace {

// Scales p to integer coefficients with gcd 1 and positive leading coefficient.
UPoly integer_primitive(const UPoly& p) {
    BigInt l = 1, c = 0;
    for (const auto& v : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    for (const auto& v : p.coeffs()) {
        const BigInt n = v.get_num() * (l / v.get_den());
        mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), n.get_mpz_t());
    }
    BigRat s(l, c);
    s.canonicalize();
    if (p.leading() < 0) s = -s;
    return p * s;
}

// Pseudo-remainder over Z: lc(b)^k a mod b.
UPoly int_prem(UPoly a, const UPoly& b) {
    const BigRat& lb = b.leading();
    while (!a.is_zero() && a.degree() >= b.degree()) {
        const BigRat la = a.leading();
        a = a * lb - b.shifted(a.degree() - b.degree()) * la;
    }
    return a;
}

}  // namespace

UPoly gcd(const UPoly& a, const UPoly& b) {
    if (a.is_zero() && b.is_zero()) throw BothZero();
    if (a.is_zero()) return b * (1 / b.leading());
    if (b.is_zero()) return a * (1 / a.leading());
    // Primitive PRS over Z keeps coefficients small.
    UPoly u = integer_primitive(a), v = integer_primitive(b);
    if (u.degree() < v.degree()) std::swap(u, v);
    while (v.degree() > 0) {
        UPoly r = int_prem(u, v);
        if (r.is_zero()) return v * (1 / v.leading());
        u = std::move(v);
        v = integer_primitive(r);
    }
    return UPoly(1);
}

// ---------------------------------------------------------------- PolyQX

PolyQX::PolyQX(BigRat constant) {
    if (constant != 0) terms_.emplace(Monomial{0, 0}, std::move(constant));
}

PolyQX PolyQX::monomial(BigRat c, int qexp, int xexp) {
    PolyQX p;
    if (c != 0) p.terms_.emplace(Monomial{qexp, xexp}, std::move(c));
    return p;
}

PolyQX PolyQX::from_q(const PolyQ& p) {
    PolyQX r;
    for (int e = 0; e <= p.degree(); ++e)
        if (p[e] != 0) r.terms_.emplace(Monomial{e, 0}, p[e]);
    return r;
}

bool PolyQX::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monomial{0, 0});
}

int PolyQX::degree_q() const { return terms_.empty() ? -1 : terms_.rbegin()->first.q; }

int PolyQX::min_degree_q() const { return terms_.empty() ? -1 : terms_.begin()->first.q; }

int PolyQX::degree_x() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.x);
    return d;
}

BigRat PolyQX::coeff(int qexp, int xexp) const {
    auto it = terms_.find(Monomial{qexp, xexp});
    return it == terms_.end() ? BigRat(0) : it->second;
}

void PolyQX::add_term(Monomial m, const BigRat& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

PolyQX PolyQX::operator-() const {
    PolyQX r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

PolyQX& PolyQX::operator+=(const PolyQX& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

PolyQX& PolyQX::operator-=(const PolyQX& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

PolyQX& PolyQX::operator*=(const BigRat& s) {
    if (s == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
}

PolyQX operator*(const PolyQX& a, const PolyQX& b) {
    PolyQX r;
    BigRat t;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            mpq_mul(t.get_mpq_t(), ca.get_mpq_t(), cb.get_mpq_t());
            r.add_term(Monomial{ma.q + mb.q, ma.x + mb.x}, t);
        }
    return r;
}

PolyQX PolyQX::shifted(int dq, int dx) const {
    PolyQX r;
    for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), Monomial{m.q + dq, m.x + dx}, c);
    return r;
}

PolyQX PolyQX::substitute_x(int k) const {
    PolyQX r;
    for (const auto& [m, c] : terms_) r.add_term(Monomial{m.q + k * m.x, m.x}, c);
    return r;
}

PolyQ PolyQX::eval_x(const BigRat& x) const {
    PolyQ r;
    for (const auto& [m, c] : terms_) {
        BigRat v = c;
        for (int i = 0; i < m.x; ++i) v *= x;
        r.add_term(m.q, v);
    }
    return r;
}

PolyQ PolyQX::coeff_x(int xexp) const {
    PolyQ r;
    for (const auto& [m, c] : terms_)
        if (m.x == xexp) r.add_term(m.q, c);
    return r;
}

PolyQX exact_div(const PolyQX& a, const PolyQX& b) {
    if (b.is_zero()) throw DivideByZero();
    PolyQX rem = a;
    PolyQX quo;
    const Monomial lb = b.leading_monomial();
    const BigRat inv_lead = 1 / b.leading_coeff();
    while (!rem.is_zero()) {
        const Monomial lr = rem.leading_monomial();
        if (lr.q < lb.q || lr.x < lb.x) throw NotDivisible();
        PolyQX t = PolyQX::monomial(rem.leading_coeff() * inv_lead, lr.q - lb.q, lr.x - lb.x);
        rem -= t * b;
        quo += t;
    }
    return quo;
}

namespace {

// Q[q][x] view: index = x-degree, entry = coefficient polynomial in q.
using RecPoly = std::vector<PolyQ>;

RecPoly to_rec(const PolyQX& p) {
    RecPoly r(static_cast<std::size_t>(p.degree_x() + 1));
    for (const auto& [m, c] : p.terms()) r[static_cast<std::size_t>(m.x)].add_term(m.q, c);
    return r;
}

PolyQX from_rec(const RecPoly& r) {
    PolyQX p;
    for (std::size_t xe = 0; xe < r.size(); ++xe)
        for (int qe = 0; qe <= r[xe].degree(); ++qe)
            if (r[xe][qe] != 0) p.add_term(Monomial{qe, static_cast<int>(xe)}, r[xe][qe]);
    return p;
}

void trim(RecPoly& r) {
    while (!r.empty() && r.back().is_zero()) r.pop_back();
}

PolyQ content(const RecPoly& r) {
    PolyQ g;
    for (const auto& c : r) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? c * (1 / c.leading()) : gcd(g, c);
        if (g.degree() == 0) break;
    }
    return g;
}

RecPoly primitive_part(const RecPoly& r, const PolyQ& cont) {
    RecPoly out(r.size());
    const bool scalar = cont.degree() == 0;
    const BigRat inv = scalar ? 1 / cont.leading() : BigRat(0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i].is_zero()) continue;
        out[i] = scalar ? r[i] * inv : exact_div(r[i], cont);
    }
    return out;
}

RecPoly primitive_part(const RecPoly& r) { return primitive_part(r, content(r)); }

PolyQ power(const PolyQ& p, int e) {
    PolyQ r(1);
    for (int i = 0; i < e; ++i) r = r * p;
    return r;
}

// Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b in Q[q][x].
RecPoly prem(RecPoly a, const RecPoly& b) {
    const int db = static_cast<int>(b.size()) - 1;
    const PolyQ& lcb = b.back();
    trim(a);
    int steps = static_cast<int>(a.size()) - db;
    while (!a.empty() && static_cast<int>(a.size()) - 1 >= db) {
        const int da = static_cast<int>(a.size()) - 1;
        const PolyQ lca = a.back();
        for (auto& c : a) c = c * lcb;
        for (int j = 0; j <= db; ++j) a[static_cast<std::size_t>(da - db + j)] -= lca * b[static_cast<std::size_t>(j)];
        trim(a);
        --steps;
    }
    if (steps > 0) {
        const PolyQ f = power(lcb, steps);
        for (auto& c : a) c = c * f;
    }
    return a;
}

}  // namespace

PolyQX gcd(const PolyQX& a, const PolyQX& b) {
    if (a.is_zero() && b.is_zero()) throw BothZero();
    PolyQX g;
    if (a.is_zero()) {
        g = b;
    } else if (b.is_zero()) {
        g = a;
    } else if (a.is_constant() || b.is_constant()) {
        g = PolyQX(1);
    } else {
        RecPoly ra = to_rec(a), rb = to_rec(b);
        const PolyQ ca = content(ra), cb = content(rb);
        RecPoly u = primitive_part(ra, ca), v = primitive_part(rb, cb);
        if (u.size() < v.size()) std::swap(u, v);
        RecPoly h;
        // Subresultant PRS: the divisions by g h^d are exact in Q[q], so no
        // content computation is needed until the last remainder.
        PolyQ lc(1), hh(1);
        while (true) {
            if (v.size() == 1) {
                h = RecPoly{PolyQ(1)};
                break;
            }
            const int d = static_cast<int>(u.size() - v.size());
            RecPoly r = prem(u, v);
            if (r.empty()) {
                h = primitive_part(v);
                break;
            }
            const PolyQ div = lc * power(hh, d);
            for (auto& c : r)
                if (!c.is_zero()) c = exact_div(c, div);
            u = std::move(v);
            v = std::move(r);
            lc = u.back();
            hh = d == 0 ? hh : exact_div(power(lc, d), power(hh, d - 1));
        }
        const PolyQ cg = gcd(ca, cb);
        for (auto& c : h) c = c * cg;
        g = from_rec(h);
    }
    return g * (1 / g.leading_coeff());
}

// ---------------------------------------------------------------- RatFn

RatFn::RatFn(PolyQX num, PolyQX den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

void RatFn::normalize() {
    if (den_.is_zero()) throw DivideByZero();
    if (num_.is_zero()) {
        den_ = PolyQX(1);
        return;
    }
    if (!den_.is_constant()) {
        PolyQX g = gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = exact_div(num_, g);
            den_ = exact_div(den_, g);
        }
    }
    // Scale the denominator to a primitive integer polynomial with positive
    // leading coefficient.
    BigInt l = 1, c = 0;
    for (const auto& [m, v] : den_.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    for (const auto& [m, v] : den_.terms()) {
        BigInt n = v.get_num() * (l / v.get_den());
        mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), n.get_mpz_t());
    }
    BigRat s(l, c);
    s.canonicalize();
    if (den_.leading_coeff() < 0) s = -s;
    if (s != 1) {
        den_ *= s;
        num_ *= s;
    }
}

RatFn RatFn::operator-() const {
    RatFn r = *this;
    r.num_ = -r.num_;
    return r;
}

RatFn operator+(const RatFn& a, const RatFn& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return RatFn(a.num_ + b.num_, a.den_);
    return RatFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFn operator-(const RatFn& a, const RatFn& b) { return a + (-b); }

RatFn operator*(const RatFn& a, const RatFn& b) {
    if (a.is_zero() || b.is_zero()) return RatFn{};
    if (a.is_polynomial() && b.is_polynomial()) {
        // Normalized polynomial values carry den == 1.
        RatFn r;
        r.num_ = a.num_ * b.num_;
        return r;
    }
    return RatFn(a.num_ * b.num_, a.den_ * b.den_);
}

RatFn operator/(const RatFn& a, const RatFn& b) {
    if (b.is_zero()) throw DivideByZero();
    return RatFn(a.num_ * b.den_, a.den_ * b.num_);
}

// ---------------------------------------------------------------- text

namespace {

std::string monomial_text(const BigRat& c, const std::string& factors, bool first) {
    std::string out;
    const bool neg = c < 0;
    if (first) {
        if (neg) out += "-";
    } else {
        out += neg ? " - " : " + ";
    }
    const BigRat mag = abs(c);
    if (factors.empty()) {
        out += to_string(mag);
    } else if (mag == 1) {
        out += factors;
    } else {
        out += to_string(mag) + "*" + factors;
    }
    return out;
}

std::string var_power(char var, int e) {
    if (e == 0) return {};
    std::string s(1, var);
    if (e != 1) s += "^" + std::to_string(e);
    return s;
}

}  // namespace

std::string to_string(const UPoly& p, char var) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (int e = p.degree(); e >= 0; --e) {
        if (p[e] == 0) continue;
        out += monomial_text(p[e], var_power(var, e), first);
        first = false;
    }
    return out;
}

std::string to_string(const PolyQX& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [m, c] = *it;
        std::string f = var_power('q', m.q);
        const std::string xf = var_power('x', m.x);
        if (!xf.empty()) f += (f.empty() ? "" : "*") + xf;
        out += monomial_text(c, f, first);
        first = false;
    }
    return out;
}

std::string to_string(const RatFn& r) {
    if (r.den() == PolyQX(1)) return to_string(r.num());
    return "(" + to_string(r.num()) + ") / (" + to_string(r.den()) + ")";
}

namespace {

class ExprParser {
public:
    explicit ExprParser(std::string_view s) : s_(s) {}

    RatFn parse() {
        RatFn v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError(why + " at offset " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    RatFn expr() {
        RatFn v = term();
        for (char c = peek(); c == '+' || c == '-'; c = peek()) {
            ++pos_;
            RatFn rhs = term();
            v = c == '+' ? v + rhs : v - rhs;
        }
        return v;
    }

    RatFn term() {
        RatFn v = unary();
        while (true) {
            const char c = peek();
            if (c == '*') {
                ++pos_;
                v = v * unary();
            } else if (c == '/') {
                ++pos_;
                v = v / unary();
            } else if (c == '(' || c == 'q' || c == 'x') {
                v = v * unary();  // juxtaposition, e.g. "(q - 1)(q^2 + 1)"
            } else {
                return v;
            }
        }
    }

    RatFn unary() {
        const char c = peek();
        if (c == '-') {
            ++pos_;
            return -unary();
        }
        if (c == '+') {
            ++pos_;
            return unary();
        }
        return power();
    }

    RatFn power() {
        RatFn base = atom();
        if (peek() != '^') return base;
        ++pos_;
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            ++pos_;
        }
        const BigInt k = integer();
        if (!k.fits_sint_p() || k > 100000) fail("exponent too large");
        RatFn r(1);
        for (long i = 0; i < k.get_si(); ++i) r = r * base;
        return neg ? RatFn(1) / r : r;
    }

    BigInt integer() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer");
        return BigInt(std::string(s_.substr(start, pos_ - start)), 10);
    }

    RatFn atom() {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            RatFn v = expr();
            if (peek() != ')') fail("expected ')'");
            ++pos_;
            return v;
        }
        if (c == 'q') {
            ++pos_;
            return RatFn(PolyQX::q());
        }
        if (c == 'x') {
            ++pos_;
            return RatFn(PolyQX::x());
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return RatFn(PolyQX(BigRat(integer())));
        fail("unexpected character");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

RatFn parse_ratfn(std::string_view text) { return ExprParser(text).parse(); }

PolyQX parse_poly(std::string_view text) {
    RatFn r = parse_ratfn(text);
    if (!r.is_polynomial()) throw ParseError("not a polynomial: " + std::string(text));
    return r.num();
}

}  // namespace qpi
