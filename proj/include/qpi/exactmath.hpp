#pragma once

/**
 * @file exactmath.hpp
 * @brief Exact rationals, polynomials in q and (q,x), and rational functions.
 *
 * Everything downstream (series, multisums, certificates) is built on these
 * types. There is no floating point anywhere: equality of two rational
 * functions is equality of their normalized representations.
 *
 * Text grammar (shared by the CLI and every JSON file):
 *   poly   := term { ('+'|'-') term }
 *   term   := coeff | [coeff '*'] 'q'['^'k] ['*' 'x'['^'k]] | ...
 *   ratfn  := poly | '(' poly ') / (' poly ')'
 * The parser is a small expression evaluator, so anything it emits (and
 * products like "(q - 1)*(q^2 + 1)") reads back.
 */

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace qpi {

using BigInt = mpz_class;
using BigRat = mpq_class;

struct MathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotDivisible : MathError {
    NotDivisible() : MathError("polynomial division is not exact") {}
};
struct DivideByZero : MathError {
    DivideByZero() : MathError("division by zero") {}
};
struct BothZero : MathError {
    BothZero() : MathError("gcd(0, 0) is undefined") {}
};
struct ParseError : MathError {
    using MathError::MathError;
};

BigRat parse_rational(std::string_view text);
std::string to_string(const BigRat& r);

// Dense univariate polynomial over Q. Used both as a polynomial in q
// (PolyQ) and as the x-polynomial coefficient of a truncated series (PolyX).
class UPoly {
public:
    UPoly() = default;
    UPoly(BigRat constant);
    UPoly(int constant) : UPoly(BigRat(constant)) {}
    explicit UPoly(std::vector<BigRat> coeffs);

    static UPoly monomial(BigRat c, int exponent);

    // -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<BigRat>& coeffs() const { return c_; }
    const BigRat& operator[](int e) const;
    const BigRat& leading() const { return c_.back(); }

    // Adds c*t^e in place.
    void add_term(int e, const BigRat& c);

    UPoly operator-() const;
    UPoly& operator+=(const UPoly& o);
    UPoly& operator-=(const UPoly& o);
    UPoly& operator*=(const BigRat& s);
    friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
    friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
    friend UPoly operator*(const UPoly& a, const UPoly& b);
    friend UPoly operator*(UPoly a, const BigRat& s) { return a *= s; }
    friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

    // Multiply by t^k (k >= 0).
    UPoly shifted(int k) const;
    BigRat eval(const BigRat& t) const;

private:
    void trim();
    std::vector<BigRat> c_;
};

using PolyQ = UPoly;
using PolyX = UPoly;

// Quotient and remainder; throws DivideByZero.
std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
UPoly exact_div(const UPoly& a, const UPoly& b);
// Monic gcd; throws BothZero.
UPoly gcd(const UPoly& a, const UPoly& b);

// Exponent pair of a bivariate monomial q^q * x^x, ordered q first.
struct Monomial {
    int q = 0;
    int x = 0;
    auto operator<=>(const Monomial&) const = default;
};

// Sparse polynomial in q and x over Q.
class PolyQX {
public:
    using Terms = std::map<Monomial, BigRat>;

    PolyQX() = default;
    PolyQX(BigRat constant);
    PolyQX(int constant) : PolyQX(BigRat(constant)) {}

    static PolyQX monomial(BigRat c, int qexp, int xexp);
    static PolyQX q(int e = 1) { return monomial(1, e, 0); }
    static PolyQX x(int e = 1) { return monomial(1, 0, e); }
    static PolyQX from_q(const PolyQ& p);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    std::size_t size() const { return terms_.size(); }
    int degree_q() const;
    int degree_x() const;
    int min_degree_q() const;
    BigRat coeff(int qexp, int xexp) const;

    // Greatest monomial in lexicographic (q, x) order.
    Monomial leading_monomial() const { return terms_.rbegin()->first; }
    const BigRat& leading_coeff() const { return terms_.rbegin()->second; }

    void add_term(Monomial m, const BigRat& c);

    PolyQX operator-() const;
    PolyQX& operator+=(const PolyQX& o);
    PolyQX& operator-=(const PolyQX& o);
    PolyQX& operator*=(const BigRat& s);
    friend PolyQX operator+(PolyQX a, const PolyQX& b) { return a += b; }
    friend PolyQX operator-(PolyQX a, const PolyQX& b) { return a -= b; }
    friend PolyQX operator*(const PolyQX& a, const PolyQX& b);
    friend PolyQX operator*(PolyQX a, const BigRat& s) { return a *= s; }
    friend bool operator==(const PolyQX& a, const PolyQX& b) { return a.terms_ == b.terms_; }

    // Multiply by q^dq x^dx.
    PolyQX shifted(int dq, int dx) const;
    // x -> x q^k.
    PolyQX substitute_x(int k) const;
    // Specialize x to a rational value.
    PolyQ eval_x(const BigRat& x) const;
    // Coefficient of x^m as a polynomial in q.
    PolyQ coeff_x(int m) const;

private:
    Terms terms_;
};

// Exact quotient in Q[q,x]; throws NotDivisible / DivideByZero.
PolyQX exact_div(const PolyQX& a, const PolyQX& b);
// Greatest common divisor, normalized so its leading coefficient is 1.
PolyQX gcd(const PolyQX& a, const PolyQX& b);

// A reduced fraction of PolyQX values. The denominator has coprime integer
// coefficients and a positive leading coefficient, so equal rational
// functions share one representation.
class RatFn {
public:
    RatFn() : den_(1) {}
    RatFn(PolyQX num) : num_(std::move(num)), den_(1) {}
    RatFn(int c) : RatFn(PolyQX(c)) {}
    RatFn(PolyQX num, PolyQX den);

    const PolyQX& num() const { return num_; }
    const PolyQX& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }

    RatFn operator-() const;
    friend RatFn operator+(const RatFn& a, const RatFn& b);
    friend RatFn operator-(const RatFn& a, const RatFn& b);
    friend RatFn operator*(const RatFn& a, const RatFn& b);
    friend RatFn operator/(const RatFn& a, const RatFn& b);
    RatFn& operator+=(const RatFn& o) { return *this = *this + o; }
    RatFn& operator-=(const RatFn& o) { return *this = *this - o; }
    RatFn& operator*=(const RatFn& o) { return *this = *this * o; }
    friend bool operator==(const RatFn& a, const RatFn& b) = default;

private:
    void normalize();
    PolyQX num_;
    PolyQX den_;
};

std::string to_string(const UPoly& p, char var);
std::string to_string(const PolyQX& p);
std::string to_string(const RatFn& r);

RatFn parse_ratfn(std::string_view text);
// Throws ParseError if the text does not denote a polynomial.
PolyQX parse_poly(std::string_view text);

}  // namespace qpi
