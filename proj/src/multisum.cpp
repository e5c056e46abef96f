#include "qpi/multisum.hpp"

#include <cassert>
#include <cctype>
#include <stdexcept>

namespace qpi {

char family_char(Family f) { return f == Family::S ? 'S' : 'T'; }

Family parse_family(std::string_view text) {
    if (text == "S" || text == "s") return Family::S;
    if (text == "T" || text == "t") return Family::T;
    throw ParseError("family must be S or T: " + std::string(text));
}

std::string to_string(const SumSpec& s) {
    return std::string(1, family_char(s.family)) + "_{" + std::to_string(s.a) + "," + std::to_string(s.b) + "," +
           std::to_string(s.c) + "}";
}

namespace {

// (Q;Q)_n with Q = q^base as a polynomial.
PolyQ poch_poly(int n, int base) {
    PolyQ p(1);
    for (int m = 1; m <= n; ++m) p = p * (PolyQ(1) - PolyQ::monomial(1, base * m));
    return p;
}

}  // namespace

PolyQ qtrinomial(int i, int j, int k, int base) {
    if (i < 0 || j < 0 || k < 0) return {};
    if (base < 1) throw MathError("trinomial base exponent must be >= 1");
    PolyQ num = poch_poly(i + j + k, base);
    num = exact_div(num, poch_poly(i, base));
    num = exact_div(num, poch_poly(j, base));
    num = exact_div(num, poch_poly(k, base));
    return num;
}

const std::array<PascalRelation, 6>& pascal_relations() {
    // Rows: exponent of Q on the i-, j-, k-decremented term as a linear form
    // in (i, j, k).
    static const std::array<PascalRelation, 6> rels{{
        {{{{0, 1, 1}, {0, 0, 1}, {0, 0, 0}}}},
        {{{{0, 1, 1}, {0, 0, 0}, {0, 1, 0}}}},
        {{{{0, 0, 1}, {1, 0, 1}, {0, 0, 0}}}},
        {{{{0, 0, 0}, {1, 0, 1}, {1, 0, 0}}}},
        {{{{0, 1, 0}, {0, 0, 0}, {1, 1, 0}}}},
        {{{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}}},
    }};
    return rels;
}

bool pascal_holds(const PascalRelation& rel, int i, int j, int k, int base) {
    const std::array<int, 3> idx{i, j, k};
    PolyQ rhs;
    for (int t = 0; t < 3; ++t) {
        std::array<int, 3> dec = idx;
        dec[static_cast<std::size_t>(t)] -= 1;
        const auto& w = rel.weights[static_cast<std::size_t>(t)];
        const int e = w[0] * i + w[1] * j + w[2] * k;
        rhs += qtrinomial(dec[0], dec[1], dec[2], base).shifted(base * e);
    }
    return rhs == qtrinomial(i, j, k, base);
}

bool pascal_check(int max_total, int base) {
    for (int total = 1; total <= max_total; ++total)
        for (int i = 0; i <= total; ++i)
            for (int j = 0; i + j <= total; ++j) {
                const int k = total - i - j;
                for (const auto& rel : pascal_relations())
                    if (!pascal_holds(rel, i, j, k, base)) return false;
            }
    return true;
}

int quadratic_exponent(int i, int j, int k) {
    const long twice = 3L * i * i - i + 1L * j * j + j + 1L * k * k + k + 2L * (1L * i * j + 1L * i * k + 1L * j * k);
    if (twice % 2 != 0 || twice < 0) throw std::logic_error("multisum exponent is not a non-negative integer");
    return static_cast<int>(twice / 2);
}

MultisumEngine::MultisumEngine(int order) : order_(order) {
    if (order < 0) throw MathError("negative order");
}

const std::vector<BigInt>& MultisumEngine::kernel(int i, int j, int k) {
    const std::array<int, 3> key{i, j, k};
    if (auto it = kernels_.find(key); it != kernels_.end()) return it->second;

    // inv_poch_[n] = 1/(q;q)_n = 1/(q;q)_{n-1} * 1/(1 - q^n)
    const int n = i + j + k;
    if (inv_poch_.empty()) {
        inv_poch_.emplace_back(static_cast<std::size_t>(order_) + 1, BigInt(0));
        inv_poch_[0][0] = 1;
    }
    while (static_cast<int>(inv_poch_.size()) <= n) {
        std::vector<BigInt> v = inv_poch_.back();
        const int m = static_cast<int>(inv_poch_.size());
        for (int e = m; e <= order_; ++e) v[static_cast<std::size_t>(e)] += v[static_cast<std::size_t>(e - m)];
        inv_poch_.push_back(std::move(v));
    }
    const std::vector<BigInt>& inv = inv_poch_[static_cast<std::size_t>(n)];

    const PolyQ tri = qtrinomial(i, j, k, 2);
    std::vector<BigInt> out(static_cast<std::size_t>(order_) + 1, BigInt(0));
    for (int d = 0; d <= tri.degree() && d <= order_; ++d) {
        if (tri[d] == 0) continue;
        assert(tri[d].get_den() == 1);
        const BigInt& coef = tri[d].get_num();
        for (int e = 0; d + e <= order_; ++e) out[static_cast<std::size_t>(d + e)] += coef * inv[static_cast<std::size_t>(e)];
    }
    return kernels_.emplace(key, std::move(out)).first->second;
}

const TruncSeries& MultisumEngine::eval(const SumSpec& spec) {
    if (auto it = cache_.find(spec); it != cache_.end()) return it->second;
    if (spec.a < 0 || spec.b < 0 || spec.c < 0) throw MathError("multisum indices must be non-negative");

    const int n_max = order_;
    // grid[n][d]: coefficient of q^n x^d.
    std::vector<std::vector<BigInt>> grid(static_cast<std::size_t>(n_max) + 1);
    // Loop bounds drop the cross terms and a, b, c, which only raise the
    // exponent, so no contributing (i,j,k) is skipped.
    for (int i = 0; (3 * i * i - i) / 2 <= n_max; ++i) {
        const int ei = (3 * i * i - i) / 2;
        for (int j = 0; ei + (j * j + j) / 2 <= n_max; ++j) {
            const int ej = (j * j + j) / 2;
            for (int k = 0; ei + ej + (k * k + k) / 2 <= n_max; ++k) {
                const long e = quadratic_exponent(i, j, k) + 1L * spec.a * i + 1L * spec.b * j + 1L * spec.c * k;
                if (e > n_max) continue;
                const int deg = spec.family == Family::S ? 2 * i + j + k : i + j + k;
                const auto& ker = kernel(i, j, k);
                for (int n = static_cast<int>(e); n <= n_max; ++n) {
                    const BigInt& v = ker[static_cast<std::size_t>(n - e)];
                    if (v == 0) continue;
                    auto& row = grid[static_cast<std::size_t>(n)];
                    if (static_cast<int>(row.size()) <= deg) row.resize(static_cast<std::size_t>(deg) + 1, BigInt(0));
                    row[static_cast<std::size_t>(deg)] += v;
                }
            }
        }
    }
    TruncSeries s(n_max);
    for (int n = 0; n <= n_max; ++n) {
        const auto& row = grid[static_cast<std::size_t>(n)];
        std::vector<BigRat> coeffs(row.begin(), row.end());
        s.add_to(n, PolyX(std::move(coeffs)));
    }
    return cache_.emplace(spec, std::move(s)).first->second;
}

TruncSeries eval_multisum(const SumSpec& spec, int order) {
    MultisumEngine engine(order);
    return engine.eval(spec);
}

SumSpec shifted_spec(const SumSpec& spec, int i) {
    SumSpec out = spec;
    out.a += (spec.family == Family::S ? 2 : 1) * i;
    out.b += i;
    out.c += i;
    return out;
}

bool shift_check(MultisumEngine& engine, const SumSpec& spec, int i) {
    const TruncSeries lhs = engine.eval(spec).substitute_x(i);
    return lhs == engine.eval(shifted_spec(spec, i));
}

bool shift_check(const SumSpec& spec, int i, int order) {
    MultisumEngine engine(order);
    return shift_check(engine, spec, i);
}

}  // namespace qpi
