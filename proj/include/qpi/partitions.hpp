#pragma once

// The three-colored class of distinct-size partitions with difference
// conditions, its restricted counts, and the q-difference systems they obey.

#include <array>
#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "qpi/exactmath.hpp"
#include "qpi/qseries.hpp"

namespace qpi {

struct CapExceeded : MathError {
    CapExceeded(int n, int cap)
        : MathError("n = " + std::to_string(n) + " exceeds the brute-force cap " + std::to_string(cap)) {}
};

enum class Color { R = 0, G = 1, B = 2 };

char color_char(Color c);

struct Part {
    int size = 0;
    Color color = Color::R;
    auto operator<=>(const Part&) const = default;
};

std::string to_string(const Part& p);
// "1R", "2g", ...
Part parse_part(std::string_view text);

/// Minimal gap between a part and the next larger part, indexed by
/// (color of the smaller part, color of the larger part).
class DiffMatrix {
public:
    constexpr explicit DiffMatrix(std::array<std::array<int, 3>, 3> gaps) : gaps_(gaps) {}

    static constexpr DiffMatrix gamma() {
        return DiffMatrix({{{3, 1, 2}, {3, 1, 2}, {2, 2, 1}}});
    }

    constexpr int min_gap(Color smaller, Color larger) const {
        return gaps_[static_cast<int>(smaller)][static_cast<int>(larger)];
    }

private:
    std::array<std::array<int, 3>, 3> gaps_;
};

using ForbiddenSet = std::set<Part>;

// Comma-separated part list, e.g. "1R,2R,1B". Empty text means no parts.
ForbiddenSet parse_forbidden(std::string_view text);

/// Parts are kept strictly decreasing in size.
struct ColoredPartition {
    std::vector<Part> parts;

    int sum() const;
    int red_parts() const;
    // "5R+1G"; the empty partition prints as "0".
    std::string to_string() const;
    // Canonical order: compare parts from the largest, larger size first,
    // then R < G < B.
    friend std::strong_ordering operator<=>(const ColoredPartition& a, const ColoredPartition& b);
    friend bool operator==(const ColoredPartition&, const ColoredPartition&) = default;
};

// Admissibility through the consecutive-gap matrix.
bool admissible_by_matrix(const ColoredPartition& p, const DiffMatrix& m, const ForbiddenSet& forbidden);
// Admissibility through the list of eight forbidden adjacent patterns,
// checked over every pair of parts.
bool admissible_by_patterns(const ColoredPartition& p, const ForbiddenSet& forbidden);

inline constexpr int kDefaultBruteForceCap = 30;

/// Members of the class summing to n that avoid the forbidden parts, in
/// canonical order.
std::vector<ColoredPartition> enumerate_gamma(int n, const ForbiddenSet& forbidden,
                                              int cap = kDefaultBruteForceCap);

// Every colored partition of n into distinct sizes, unfiltered. Oracle input.
std::vector<ColoredPartition> enumerate_distinct_colored(int n, int cap = kDefaultBruteForceCap);

enum class Variant { Q1, Q2, Q3, Qstar1 };
enum class Statistic { NumParts, Weighted };

ForbiddenSet forbidden_for(Variant v);
Statistic default_statistic(Variant v);
// num-parts: 1 per part; weighted: 2 per red part, 1 otherwise.
int statistic_of(const ColoredPartition& p, Statistic stat);

/// Counts indexed by (m, n): m the statistic, n the sum.
class CountTable {
public:
    explicit CountTable(int order = 0) : order_(order) {}

    int order() const { return order_; }
    BigInt get(int m, int n) const;
    void add(int m, int n, const BigInt& v);
    void set(int m, int n, const BigInt& v);
    // Sum over m at fixed n.
    BigInt total(int n) const;
    const std::map<std::pair<int, int>, BigInt>& entries() const { return entries_; }

    // sum A(m,n) x^m q^n.
    TruncSeries to_series() const;

    nlohmann::json to_json() const;
    static CountTable from_json(const nlohmann::json& j);

    friend bool operator==(const CountTable&, const CountTable&) = default;

private:
    int order_;
    std::map<std::pair<int, int>, BigInt> entries_;  // key (m, n), no zero entries
};

// Dynamic program over (largest part, its color).
CountTable count_gamma(Variant v, int order, Statistic stat);
CountTable count_gamma(Variant v, int order);
CountTable count_gamma(const ForbiddenSet& forbidden, int order, Statistic stat);
// The same table from enumerate_gamma; n must stay within the cap.
CountTable count_by_enumeration(Variant v, int order, Statistic stat, int cap = kDefaultBruteForceCap);

// The coupled system for (Q1, Q2, Q3), unknowns indexed 0, 1, 2.
std::vector<FuncEqSpec> q_system();
FuncEqSpec untangled_q1();
FuncEqSpec untangled_q3();

bool q_system_check(const CountTable& q1, const CountTable& q2, const CountTable& q3);
bool q_system_check(int order);
bool untangled_check(const CountTable& q1, const CountTable& q3);
bool untangled_check(int order);

/// Pairs (lambda, mu): lambda into distinct parts, mu with gaps >= 2 (and
/// parts >= 2 for RR2). by_parts refines by the total number of parts.
struct PairCount {
    BigInt total = 0;
    std::map<int, BigInt> by_parts;
};

PairCount pair_partition_count(int n, PairVariant variant, int cap = kDefaultBruteForceCap);

}  // namespace qpi
