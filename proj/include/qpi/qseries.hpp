#pragma once

// Truncated power series in q whose coefficients are polynomials in x.

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"

#include "qpi/exactmath.hpp"

namespace qpi {

struct NonUnitConstantTerm : MathError {
    NonUnitConstantTerm() : MathError("series constant term is not a nonzero rational") {}
};
struct DivergentInfiniteProduct : MathError {
    DivergentInfiniteProduct() : MathError("infinite Pochhammer product needs a q-exponent >= 1") {}
};
struct OrderMismatch : MathError {
    OrderMismatch() : MathError("series operands have different truncation orders") {}
};

// Location of a coefficient: q^qexp x^xexp.
struct CoeffPos {
    int qexp = 0;
    int xexp = 0;
    friend bool operator==(const CoeffPos&, const CoeffPos&) = default;
};

/// Power series sum_{n<=order} c_n(x) q^n. Every operation is exact through
/// the smaller of the operand orders; the x-polynomials are never truncated
/// unless an explicit x-degree cap is set.
class TruncSeries {
public:
    explicit TruncSeries(int order = 0);

    static TruncSeries one(int order);
    static TruncSeries from_poly(const PolyQX& p, int order);

    int order() const { return order_; }
    std::optional<int> x_cap() const { return xcap_; }
    // Drops every x^m with m > cap, now and in products formed later.
    TruncSeries with_x_cap(int cap) const;

    const PolyX& coeff(int n) const;
    BigRat coeff(int n, int m) const;
    void add_to(int n, const PolyX& p);
    void add_to(int n, int m, const BigRat& c);

    bool is_zero() const;
    bool is_x_free() const;

    TruncSeries operator-() const;
    TruncSeries& operator+=(const TruncSeries& o);
    TruncSeries& operator-=(const TruncSeries& o);
    friend TruncSeries operator+(TruncSeries a, const TruncSeries& b) { return a += b; }
    friend TruncSeries operator-(TruncSeries a, const TruncSeries& b) { return a -= b; }
    friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b);
    friend TruncSeries operator*(const TruncSeries& a, const PolyQX& p);
    friend TruncSeries operator*(const PolyQX& p, const TruncSeries& a) { return a * p; }
    friend TruncSeries operator*(TruncSeries a, const BigRat& s);

    // Coefficientwise through the common order.
    friend bool operator==(const TruncSeries& a, const TruncSeries& b) { return !first_difference(a, b); }
    friend std::optional<CoeffPos> first_difference(const TruncSeries& a, const TruncSeries& b);

    // x -> x q^k: the coefficient of x^m q^n moves to x^m q^{n+km}.
    TruncSeries substitute_x(int k) const;
    // x -> value; the result is x-free.
    TruncSeries eval_x(const BigRat& value) const;
    TruncSeries truncated(int order) const;

    nlohmann::json to_json() const;
    static TruncSeries from_json(const nlohmann::json& j);

private:
    void cap(PolyX& p) const;

    int order_;
    std::optional<int> xcap_;
    std::vector<PolyX> c_;
};

std::string to_string(const TruncSeries& s);

// Multiplicative inverse through the order; the constant term must be a
// nonzero rational.
TruncSeries invert(const TruncSeries& a);

/// (a; q^base)_length with a = sign * x^xexp * q^qexp. No length means the
/// infinite product.
struct PochSpec {
    int sign = 1;
    int xexp = 0;
    int qexp = 1;
    int base = 1;
    std::optional<int> length;
};

TruncSeries pochhammer(const PochSpec& spec, int order);
// (q^qexp; q^base)_inf, the common case.
TruncSeries poch_q(int qexp, int base, int order);

// 1/((q;q^2)_inf (q,q^4;q^5)_inf) for theorem 1, and with (q^2,q^3;q^5)_inf
// for theorem 2.
TruncSeries product_side(int theorem, int order);

enum class PairVariant { RR1, RR2 };
// (-xq;q)_inf * sum_n x^n q^{n^2} / (q;q)_n, with n^2+n for RR2.
TruncSeries pair_gf(PairVariant variant, int order);

// Exponents e_k with s = prod_k (1 - q^k)^{-e_k} through the order. Only the
// nonzero exponents are returned.
std::map<int, BigRat> euler_factorize(const TruncSeries& s);
TruncSeries euler_reconstruct(const std::map<int, BigRat>& exponents, int order);

/// One term multiplier * F_unknown(x q^shift) of a linear q-difference
/// equation sum_t term_t = 0.
struct FuncEqTerm {
    PolyQX multiplier;
    int shift = 0;
    int unknown = 0;
};
using FuncEqSpec = std::vector<FuncEqTerm>;

// f(x) = (1+xq) f(xq) + xq (1+xq)(1+xq^2) f(xq^2)
FuncEqSpec funceq_rr1();
// g(x) = (1+xq) g(xq) + xq^2 (1+xq)(1+xq^2) g(xq^2)
FuncEqSpec funceq_rr2();

TruncSeries funceq_residual(std::span<const TruncSeries> unknowns, const FuncEqSpec& eq);
bool funceq_check(const TruncSeries& s, const FuncEqSpec& eq);
bool funceq_check(std::span<const TruncSeries> unknowns, const FuncEqSpec& eq);

}  // namespace qpi
