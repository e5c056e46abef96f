#pragma once

// q-trinomial coefficients and the S/T triple sums
//
//   S_{a,b,c}(x) = sum_{i,j,k>=0} q^{E(i,j,k) + ai + bj + ck} / (q;q)_{i+j+k}
//                  * [i+j+k; i,j,k]_{q^2} * x^{2i+j+k}
//   E(i,j,k) = (3i^2 + j^2 + k^2)/2 + ij + ik + jk + (-i + j + k)/2
//
// and T_{a,b,c}(x) the same with x^{i+j+k}.

#include <array>
#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qpi/exactmath.hpp"
#include "qpi/qseries.hpp"

namespace qpi {

enum class Family { S, T };

char family_char(Family f);
Family parse_family(std::string_view text);

struct SumSpec {
    Family family = Family::S;
    int a = 0;
    int b = 0;
    int c = 0;
    auto operator<=>(const SumSpec&) const = default;
};

std::string to_string(const SumSpec& s);

/// (Q;Q)_{i+j+k} / ((Q;Q)_i (Q;Q)_j (Q;Q)_k) with Q = q^base, by exact
/// polynomial division. Any negative index gives 0.
PolyQ qtrinomial(int i, int j, int k, int base = 1);

/// One of the six Pascal-type recurrences
///   [i,j,k] = Q^{w0.(i,j,k)} [i-1,j,k] + Q^{w1.(i,j,k)} [i,j-1,k] + Q^{w2.(i,j,k)} [i,j,k-1]
struct PascalRelation {
    std::array<std::array<int, 3>, 3> weights;
};

const std::array<PascalRelation, 6>& pascal_relations();
bool pascal_holds(const PascalRelation& rel, int i, int j, int k, int base);
// Every relation at every (i,j,k) with 1 <= i+j+k <= max_total.
bool pascal_check(int max_total, int base);

// E(i,j,k); asserts the half-integer parts cancel.
int quadratic_exponent(int i, int j, int k);

/// Evaluates S/T sums through a fixed order, caching both the per-(i,j,k)
/// kernels [i+j+k; i,j,k]_{q^2}/(q;q)_{i+j+k} and finished series. Not
/// thread-safe; use one engine per thread.
class MultisumEngine {
public:
    explicit MultisumEngine(int order);

    int order() const { return order_; }
    const TruncSeries& eval(const SumSpec& spec);
    std::size_t cached() const { return cache_.size(); }

private:
    const std::vector<BigInt>& kernel(int i, int j, int k);

    int order_;
    std::vector<std::vector<BigInt>> inv_poch_;
    std::map<std::array<int, 3>, std::vector<BigInt>> kernels_;
    std::map<SumSpec, TruncSeries> cache_;
};

TruncSeries eval_multisum(const SumSpec& spec, int order);

// The SumSpec whose sum equals the given one evaluated at x q^i.
SumSpec shifted_spec(const SumSpec& spec, int i);
bool shift_check(const SumSpec& spec, int i, int order);
bool shift_check(MultisumEngine& engine, const SumSpec& spec, int i);

}  // namespace qpi
