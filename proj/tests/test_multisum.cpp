#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracle.hpp"
#include "qpi/multisum.hpp"

using namespace qpi;
using namespace qpi::oracle;

namespace {

bool same(const PolyQ& p, const IntPoly& o) {
    for (int e = 0; e <= std::max<int>(p.degree(), static_cast<int>(o.size()) - 1); ++e) {
        const BigRat want = e < static_cast<int>(o.size()) ? BigRat(o[e]) : BigRat(0);
        if ((e <= p.degree() ? p[e] : BigRat(0)) != want) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("q-trinomials") {
    CHECK(qtrinomial(1, 1, 0) == PolyQ(std::vector<BigRat>{1, 1}));
    CHECK(qtrinomial(1, 1, 1) == PolyQ(std::vector<BigRat>{1, 2, 2, 1}));
    CHECK(qtrinomial(0, 0, 0) == PolyQ(1));
    CHECK(qtrinomial(-1, 2, 0).is_zero());
    CHECK(qtrinomial(1, 1, 0, 2) == PolyQ(std::vector<BigRat>{1, 0, 1}));
    for (int base : {1, 2})
        for (int i = 0; i <= 4; ++i)
            for (int j = 0; j <= 4; ++j)
                for (int k = 0; k <= 4; ++k) CHECK(same(qtrinomial(i, j, k, base), trinomial_oracle(i, j, k, base)));
}

TEST_CASE("pascal recurrences") {
    CHECK(pascal_relations().size() == 6);
    CHECK(pascal_check(9, 1));
    CHECK(pascal_check(9, 2));
    for (const PascalRelation& rel : pascal_relations()) {
        PascalRelation broken = rel;
        broken.weights[0][0] += 1;
        bool fails = false;
        for (int i = 1; i <= 3 && !fails; ++i)
            for (int j = 0; j <= 3 && !fails; ++j)
                for (int k = 0; k <= 3 && !fails; ++k) fails = !pascal_holds(broken, i, j, k, 2);
        CHECK(fails);
    }
}

TEST_CASE("quadratic exponent") {
    CHECK(quadratic_exponent(0, 0, 0) == 0);
    CHECK(quadratic_exponent(1, 0, 0) == 1);
    CHECK(quadratic_exponent(0, 1, 0) == 1);
    CHECK(quadratic_exponent(0, 0, 1) == 1);
    CHECK(quadratic_exponent(1, 1, 1) == 6);
    CHECK(quadratic_exponent(2, 0, 0) == 5);
}

TEST_CASE("triple sums against direct summation") {
    const int N = 18;
    MultisumEngine engine(N);
    for (Family f : {Family::S, Family::T})
        for (const auto& [a, b, c] : std::vector<std::array<int, 3>>{{0, 0, 0}, {3, 0, 1}, {2, 0, 1}, {1, 2, 3}}) {
            const SumSpec spec{f, a, b, c};
            const TruncSeries& s = engine.eval(spec);
            const auto oracle = multisum_oracle(spec, N);
            for (int n = 0; n <= N; ++n) {
                CHECK(s.coeff(n).degree() < static_cast<int>(oracle[n].size()));
                for (std::size_t m = 0; m < oracle[n].size(); ++m) CHECK(s.coeff(n, m) == oracle[n][m]);
            }
            CHECK(eval_multisum(spec, N) == s);
        }
    CHECK(engine.cached() == 8);
}

TEST_CASE("x shifts") {
    const int N = 20;
    CHECK(shifted_spec({Family::S, 3, 0, 1}, 1) == SumSpec{Family::S, 5, 1, 2});
    CHECK(shifted_spec({Family::T, 3, 0, 1}, 2) == SumSpec{Family::T, 5, 2, 3});
    MultisumEngine engine(N);
    for (Family f : {Family::S, Family::T})
        for (int i = 1; i <= 3; ++i) {
            const SumSpec spec{f, 1, 0, 2};
            CHECK(shift_check(engine, spec, i));
            CHECK(engine.eval(shifted_spec(spec, i)) == engine.eval(spec).substitute_x(i));
        }
    CHECK(shift_check({Family::S, 0, 1, 1}, 2, N));
}

TEST_CASE("specializations at x = 1") {
    const int N = 30;
    MultisumEngine engine(N);
    const TruncSeries s301 = engine.eval({Family::S, 3, 0, 1}).eval_x(1);
    CHECK(s301 == engine.eval({Family::T, 3, 0, 1}).eval_x(1));
    CHECK(engine.eval({Family::S, 2, 0, 1}).eval_x(1) == engine.eval({Family::T, 2, 0, 1}).eval_x(1));
    CHECK(s301 * parse_poly("1 + q") == product_side(1, N));
    CHECK(engine.eval({Family::S, 0, 0, 0}).eval_x(0) == TruncSeries::one(N));
}

TEST_CASE("family names") {
    CHECK(parse_family("T") == Family::T);
    CHECK(family_char(Family::S) == 'S');
    CHECK_THROWS(parse_family("U"));
    CHECK(to_string(SumSpec{Family::S, 3, 0, 1}) == "S_{3,0,1}");
}
