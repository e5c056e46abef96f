#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "qpi/exactmath.hpp"

using namespace qpi;

namespace {

PolyQX P(const char* s) { return parse_poly(s); }
RatFn R(const char* s) { return parse_ratfn(s); }

PolyQX random_poly(std::mt19937& rng, int max_deg, int terms) {
    std::uniform_int_distribution<int> deg(0, max_deg), coef(-5, 5);
    PolyQX p;
    for (int t = 0; t < terms; ++t) p.add_term(Monomial{deg(rng), deg(rng)}, BigRat(coef(rng)));
    return p;
}

// Coefficient-map product, independent of PolyQX::operator*.
std::map<std::pair<int, int>, BigRat> naive_product(const PolyQX& a, const PolyQX& b) {
    std::map<std::pair<int, int>, BigRat> out;
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) out[{ma.q + mb.q, ma.x + mb.x}] += ca * cb;
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

}  // namespace

TEST_CASE("rationals") {
    CHECK(parse_rational("-6/4") == BigRat(-3, 2));
    CHECK(to_string(BigRat(1, 2) - BigRat(1)) == "-1/2");
    CHECK_THROWS_AS(parse_rational("1/0"), MathError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
}

TEST_CASE("univariate") {
    const PolyQ a(std::vector<BigRat>{1, -1});  // 1 - q
    CHECK(a.degree() == 1);
    CHECK(PolyQ().degree() == -1);
    CHECK((a * a) == PolyQ(std::vector<BigRat>{1, -2, 1}));
    CHECK(a.shifted(2) == PolyQ(std::vector<BigRat>{0, 0, 1, -1}));
    const PolyQ g = gcd(a * PolyQ(std::vector<BigRat>{1, 0, 1}), PolyQ(std::vector<BigRat>{1, 0, 1}) * PolyQ(3));
    CHECK(g == PolyQ(std::vector<BigRat>{1, 0, 1}));
    CHECK_THROWS_AS(gcd(PolyQ(), PolyQ()), BothZero);
    CHECK_THROWS_AS(exact_div(a, PolyQ(std::vector<BigRat>{1, 0, 1})), NotDivisible);
}

TEST_CASE("poly arithmetic") {
    CHECK(P("q+x") * P("q-x") == P("q^2-x^2"));
    CHECK(P("q^2+1") + PolyQX() == P("q^2+1"));
    CHECK(P("q^2+1") * P("q^2+1") == P("q^4+2*q^2+1"));
    CHECK(P("(q-1)(q^2+1)") == P("q^3-q^2+q-1"));
    CHECK(P("2x q^3").coeff(3, 1) == 2);
    CHECK(P("x^2*q + 3").degree_x() == 2);
    CHECK(P("x*q^2").substitute_x(3) == P("x*q^5"));
}

TEST_CASE("exact division") {
    CHECK(exact_div(P("q^2-x^2"), P("q-x")) == P("q+x"));
    CHECK(exact_div(P("q^3+x"), PolyQX(1)) == P("q^3+x"));
    const PolyQX p = P("q^5-q^4+2*q^3-2*q^2-q*x+q-1");
    CHECK(exact_div(p * P("q-1"), P("q-1")) == p);
    CHECK_THROWS_AS(exact_div(P("q^2+1"), P("q-1")), NotDivisible);
    CHECK_THROWS_AS(exact_div(P("q"), PolyQX()), DivideByZero);
}

TEST_CASE("gcd") {
    CHECK(gcd(P("q-x"), P("q+x")) == PolyQX(1));
    CHECK(gcd(P("2*q+4"), PolyQX()) == P("q+2"));
    const PolyQX g = gcd(P("(q-1)(q^2+1)"), P("(q^2+1)^2"));
    CHECK(g == P("q^2+1"));
    CHECK_NOTHROW(exact_div(P("(q-1)(q^2+1)"), g));
    CHECK_NOTHROW(exact_div(P("(q^2+1)^2"), g));
    CHECK(gcd(P("x*q*(1+x*q)^2*(q-x)"), P("q^3*(1+x*q)*(q+x)")) == P("x*q^2 + q"));
    CHECK_THROWS_AS(gcd(PolyQX(), PolyQX()), BothZero);
}

TEST_CASE("rational functions") {
    const RatFn a = R("(q^2+x)/(q-1)");
    CHECK(a * (RatFn(1) / a) == RatFn(1));
    CHECK((R("x*q/(q^2+1)") + R("-x*q/(q^2+1)")).is_zero());
    CHECK(R("1/(q-1)") + R("1/(q+1)") == R("2*q/(q^2-1)"));
    CHECK(R("(q^2-1)/(q-1)") == R("q+1"));
    CHECK(R("(q^2-1)/(q-1)").is_polynomial());
    CHECK(R("1/(2-2*q)") == R("(-1/2)/(q-1)"));
    CHECK_THROWS_AS(RatFn(1) / RatFn(), DivideByZero);
}

TEST_CASE("normal form") {
    const RatFn r = R("(6*q)/(4*q^2 - 2)");
    CHECK(r.den() == P("2*q^2-1"));
    CHECK(r.num() == P("3*q"));
    CHECK(R("x/(-q)").den() == P("q"));
}

TEST_CASE("text round trip") {
    for (const char* s : {"0", "1", "-x*q^3 + 2/3", "(q^4*x - 1) / (q^2 + 1)", "x^2*q^4/((q-1)*(q^2+1)^2)"}) {
        const RatFn r = R(s);
        CHECK(R(to_string(r).c_str()) == r);
    }
    CHECK(R("q^-2*(q^3+q^2)") == R("q+1"));
    CHECK_THROWS_AS(R("q + "), ParseError);
    CHECK_THROWS_AS(R("(q+1"), ParseError);
    CHECK_THROWS_AS(R("y"), ParseError);
    CHECK_THROWS_AS(P("1/q"), ParseError);
}

TEST_CASE("random products and field laws") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const PolyQX a = random_poly(rng, 4, 4), b = random_poly(rng, 4, 4), c = random_poly(rng, 3, 3);
        const PolyQX ab = a * b;
        std::map<std::pair<int, int>, BigRat> got;
        for (const auto& [m, v] : ab.terms()) got[{m.q, m.x}] = v;
        CHECK(got == naive_product(a, b));
        if (!b.is_zero()) CHECK(exact_div(a * b, b) == a);
        if (a.is_zero() || b.is_zero() || c.is_zero()) continue;
        const PolyQX g = gcd(a * c, b * c);
        CHECK_NOTHROW(exact_div(a * c, g));
        CHECK_NOTHROW(exact_div(b * c, g));
        CHECK_NOTHROW(exact_div(g, gcd(c, c)));
        const RatFn x(a, b), y(c, a + PolyQX(7));
        CHECK((x + y) - y == x);
        CHECK((x * y) / y == x);
        CHECK(x * (y + RatFn(b)) == x * y + x * RatFn(b));
    }
}
