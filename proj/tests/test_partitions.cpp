#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "qpi/partitions.hpp"

using namespace qpi;

namespace {

constexpr int kGap[3][3] = {{3, 1, 2}, {3, 1, 2}, {2, 2, 1}};

// Independent enumeration: choose parts from the largest down, each smaller
// part respecting the gap to the part just above it.
void gamma_oracle(int remaining, int above_size, int above_color, std::vector<Part>& cur,
                  const ForbiddenSet& forbidden, std::vector<std::vector<Part>>& out) {
    if (remaining == 0) {
        out.push_back(cur);
        return;
    }
    for (int s = std::min(remaining, above_size - 1); s >= 1; --s)
        for (int c = 0; c < 3; ++c) {
            if (above_color >= 0 && above_size - s < kGap[c][above_color]) continue;
            const Part p{s, static_cast<Color>(c)};
            if (forbidden.count(p)) continue;
            cur.push_back(p);
            gamma_oracle(remaining - s, s, c, cur, forbidden, out);
            cur.pop_back();
        }
}

std::vector<std::string> oracle_strings(int n, const ForbiddenSet& forbidden) {
    std::vector<std::vector<Part>> raw;
    std::vector<Part> cur;
    gamma_oracle(n, n + 1, -1, cur, forbidden, raw);
    std::vector<std::string> out;
    for (const auto& parts : raw) out.push_back(ColoredPartition{parts}.to_string());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> engine_strings(int n, const ForbiddenSet& forbidden) {
    std::vector<std::string> out;
    for (const auto& p : enumerate_gamma(n, forbidden)) out.push_back(p.to_string());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> sorted(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("parts and parsing") {
    CHECK(parse_part("12g") == Part{12, Color::G});
    CHECK(to_string(Part{3, Color::B}) == "3B");
    CHECK_THROWS(parse_part("0R"));
    CHECK_THROWS(parse_part("3Y"));
    CHECK(parse_forbidden("1R, 2R,1B").size() == 3);
    CHECK(parse_forbidden("").empty());
    CHECK(ColoredPartition{}.to_string() == "0");
    CHECK(ColoredPartition{{{5, Color::R}, {1, Color::G}}}.to_string() == "5R+1G");
}

TEST_CASE("difference matrix") {
    const DiffMatrix m = DiffMatrix::gamma();
    for (int s = 0; s < 3; ++s)
        for (int l = 0; l < 3; ++l) CHECK(m.min_gap(Color(s), Color(l)) == kGap[s][l]);
}

TEST_CASE("listed members of size 6") {
    const auto q1 = enumerate_gamma(6, parse_forbidden("1R"));
    CHECK(q1.size() == 18);
    std::vector<std::string> got;
    for (const auto& p : q1) got.push_back(p.to_string());
    CHECK(got == std::vector<std::string>{"6R", "6G", "6B", "5R+1G", "5R+1B", "5G+1G", "5G+1B", "5B+1G", "5B+1B",
                                          "4R+2B", "4G+2R", "4G+2G", "4G+2B", "4B+2R", "4B+2G", "4B+2B",
                                          "3G+2G+1G", "3B+2B+1B"});
    CHECK(engine_strings(6, parse_forbidden("1R,2R,1B")) ==
          sorted({"6R", "6G", "6B", "5R+1G", "5G+1G", "5B+1G", "4R+2B", "4G+2G", "4G+2B", "4B+2G", "4B+2B",
                  "3G+2G+1G"}));
    CHECK(enumerate_gamma(6, {}).size() == 22);
}

TEST_CASE("enumeration against the oracle") {
    for (const char* f : {"", "1R", "1R,1G", "1R,2R,1B"}) {
        const ForbiddenSet forbidden = parse_forbidden(f);
        for (int n = 0; n <= 16; ++n) CHECK(engine_strings(n, forbidden) == oracle_strings(n, forbidden));
    }
}

TEST_CASE("matrix and pattern admissibility agree") {
    const DiffMatrix m = DiffMatrix::gamma();
    for (int n = 1; n <= 14; ++n) {
        const auto members = oracle_strings(n, {});
        for (const auto& p : enumerate_distinct_colored(n)) {
            const bool in_class = std::binary_search(members.begin(), members.end(), p.to_string());
            CHECK(admissible_by_matrix(p, m, {}) == in_class);
            CHECK(admissible_by_patterns(p, {}) == in_class);
        }
    }
}

TEST_CASE("brute-force cap") {
    CHECK_THROWS_AS(enumerate_gamma(31, {}), CapExceeded);
    CHECK_NOTHROW(enumerate_gamma(8, {}, 8));
    CHECK_THROWS_AS(pair_partition_count(9, PairVariant::RR1, 8), CapExceeded);
}

TEST_CASE("dynamic program against enumeration") {
    for (Variant v : {Variant::Q1, Variant::Q2, Variant::Q3, Variant::Qstar1})
        for (Statistic s : {Statistic::NumParts, Statistic::Weighted})
            CHECK(count_gamma(v, 22, s) == count_by_enumeration(v, 22, s));
    const CountTable q1 = count_gamma(Variant::Q1, 10), q3 = count_gamma(Variant::Q3, 10);
    CHECK(q1.total(1) == 2);
    CHECK(q3.total(1) == 1);
    CHECK(q1.total(6) == 18);
    CHECK(q3.total(6) == 12);
    CHECK(q1.get(0, 0) == 1);
    CHECK(CountTable::from_json(q1.to_json()) == q1);
}

TEST_CASE("weighted statistic") {
    const ColoredPartition p{{{5, Color::R}, {2, Color::B}, {1, Color::R}}};
    CHECK(statistic_of(p, Statistic::NumParts) == 3);
    CHECK(statistic_of(p, Statistic::Weighted) == 5);
    CHECK(p.red_parts() == 2);
    CHECK(p.sum() == 8);
}

TEST_CASE("q-difference systems") {
    CHECK(q_system_check(30));
    CHECK(untangled_check(30));
    const CountTable q1 = count_gamma(Variant::Q1, 20), q2 = count_gamma(Variant::Q2, 20),
                     q3 = count_gamma(Variant::Q3, 20);
    CHECK(q_system_check(q1, q2, q3));
    CHECK_FALSE(q_system_check(q1, q3, q2));
    CountTable bad = q1;
    bad.add(2, 9, 1);
    CHECK_FALSE(q_system_check(bad, q2, q3));
    CHECK_FALSE(untangled_check(bad, q3));
    CHECK(funceq_check(q1.to_series(), untangled_q1()));
    CHECK(funceq_check(q3.to_series(), untangled_q3()));
}

TEST_CASE("pair counts") {
    CHECK(pair_partition_count(4, PairVariant::RR1).total == 8);
    CHECK(pair_partition_count(2, PairVariant::RR2).total == 2);
    const TruncSeries gf = pair_gf(PairVariant::RR1, 16);
    for (int n = 0; n <= 16; ++n) {
        const PairCount pc = pair_partition_count(n, PairVariant::RR1);
        BigInt sum = 0;
        for (const auto& [m, c] : pc.by_parts) {
            CHECK(gf.coeff(n, m) == BigRat(c));
            sum += c;
        }
        CHECK(sum == pc.total);
    }
}
