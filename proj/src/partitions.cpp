#include "qpi/partitions.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace qpi {

char color_char(Color c) {
    switch (c) {
        case Color::R: return 'R';
        case Color::G: return 'G';
        case Color::B: return 'B';
    }
    return '?';
}

std::string to_string(const Part& p) { return std::to_string(p.size) + color_char(p.color); }

Part parse_part(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i || i + 1 != text.size()) throw ParseError("bad part: " + std::string(text));
    const int size = std::stoi(std::string(text.substr(start, i - start)));
    if (size < 1) throw ParseError("part size must be positive: " + std::string(text));
    switch (std::toupper(static_cast<unsigned char>(text[i]))) {
        case 'R': return {size, Color::R};
        case 'G': return {size, Color::G};
        case 'B': return {size, Color::B};
        default: throw ParseError("bad color in part: " + std::string(text));
    }
}

ForbiddenSet parse_forbidden(std::string_view text) {
    ForbiddenSet out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        std::string_view item = text.substr(pos, comma - pos);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
        if (!item.empty()) out.insert(parse_part(item));
        pos = comma + 1;
    }
    return out;
}

int ColoredPartition::sum() const {
    int s = 0;
    for (const auto& p : parts) s += p.size;
    return s;
}

int ColoredPartition::red_parts() const {
    return static_cast<int>(std::count_if(parts.begin(), parts.end(), [](const Part& p) { return p.color == Color::R; }));
}

std::string ColoredPartition::to_string() const {
    if (parts.empty()) return "0";
    std::string s;
    for (const auto& p : parts) {
        if (!s.empty()) s += "+";
        s += qpi::to_string(p);
    }
    return s;
}

std::strong_ordering operator<=>(const ColoredPartition& a, const ColoredPartition& b) {
    const std::size_t n = std::min(a.parts.size(), b.parts.size());
    for (std::size_t i = 0; i < n; ++i) {
        const Part& pa = a.parts[i];
        const Part& pb = b.parts[i];
        if (pa.size != pb.size) return pb.size <=> pa.size;
        if (pa.color != pb.color) return pa.color <=> pb.color;
    }
    return a.parts.size() <=> b.parts.size();
}

namespace {

bool well_formed(const ColoredPartition& p, const ForbiddenSet& forbidden) {
    for (std::size_t i = 0; i < p.parts.size(); ++i) {
        if (p.parts[i].size < 1 || forbidden.contains(p.parts[i])) return false;
        if (i > 0 && p.parts[i - 1].size <= p.parts[i].size) return false;
    }
    return true;
}

struct Pattern {
    Color lower;
    Color upper;
    int gap;
};

// j_lower + (j+gap)_upper may not appear together.
constexpr std::array<Pattern, 8> kForbiddenPatterns{{
    {Color::R, Color::R, 1},
    {Color::R, Color::R, 2},
    {Color::R, Color::B, 1},
    {Color::G, Color::R, 1},
    {Color::G, Color::R, 2},
    {Color::G, Color::B, 1},
    {Color::B, Color::R, 1},
    {Color::B, Color::G, 1},
}};

}  // namespace

bool admissible_by_matrix(const ColoredPartition& p, const DiffMatrix& m, const ForbiddenSet& forbidden) {
    if (!well_formed(p, forbidden)) return false;
    for (std::size_t i = 1; i < p.parts.size(); ++i) {
        const Part& larger = p.parts[i - 1];
        const Part& smaller = p.parts[i];
        if (larger.size - smaller.size < m.min_gap(smaller.color, larger.color)) return false;
    }
    return true;
}

bool admissible_by_patterns(const ColoredPartition& p, const ForbiddenSet& forbidden) {
    if (!well_formed(p, forbidden)) return false;
    for (std::size_t i = 0; i < p.parts.size(); ++i)
        for (std::size_t j = i + 1; j < p.parts.size(); ++j) {
            const Part& upper = p.parts[i];
            const Part& lower = p.parts[j];
            for (const auto& pat : kForbiddenPatterns)
                if (pat.lower == lower.color && pat.upper == upper.color && upper.size - lower.size == pat.gap)
                    return false;
        }
    return true;
}

namespace {

constexpr std::array<Color, 3> kColors{Color::R, Color::G, Color::B};

// Depth-first over parts in decreasing size; visiting sizes from the top
// and colors R, G, B yields canonical order.
void enumerate_rec(int remaining, int max_size, const std::function<bool(const Part&, const Part*)>& allowed,
                   ColoredPartition& cur, std::vector<ColoredPartition>& out) {
    if (remaining == 0) {
        out.push_back(cur);
        return;
    }
    for (int s = std::min(remaining, max_size); s >= 1; --s) {
        if (s * (s + 1) / 2 < remaining) break;
        for (Color c : kColors) {
            const Part part{s, c};
            const Part* prev = cur.parts.empty() ? nullptr : &cur.parts.back();
            if (!allowed(part, prev)) continue;
            cur.parts.push_back(part);
            enumerate_rec(remaining - s, s - 1, allowed, cur, out);
            cur.parts.pop_back();
        }
    }
}

}  // namespace

std::vector<ColoredPartition> enumerate_gamma(int n, const ForbiddenSet& forbidden, int cap) {
    if (n > cap) throw CapExceeded(n, cap);
    if (n < 0) return {};
    constexpr DiffMatrix m = DiffMatrix::gamma();
    std::vector<ColoredPartition> out;
    ColoredPartition cur;
    enumerate_rec(
        n, n,
        [&](const Part& p, const Part* larger) {
            if (forbidden.contains(p)) return false;
            return larger == nullptr || larger->size - p.size >= m.min_gap(p.color, larger->color);
        },
        cur, out);
    return out;
}

std::vector<ColoredPartition> enumerate_distinct_colored(int n, int cap) {
    if (n > cap) throw CapExceeded(n, cap);
    if (n < 0) return {};
    std::vector<ColoredPartition> out;
    ColoredPartition cur;
    enumerate_rec(n, n, [](const Part&, const Part*) { return true; }, cur, out);
    return out;
}

ForbiddenSet forbidden_for(Variant v) {
    switch (v) {
        case Variant::Q1:
        case Variant::Qstar1: return {{1, Color::R}};
        case Variant::Q2: return {{1, Color::R}, {1, Color::G}};
        case Variant::Q3: return {{1, Color::R}, {2, Color::R}, {1, Color::B}};
    }
    return {};
}

Statistic default_statistic(Variant v) { return v == Variant::Qstar1 ? Statistic::Weighted : Statistic::NumParts; }

int statistic_of(const ColoredPartition& p, Statistic stat) {
    const int k = static_cast<int>(p.parts.size());
    return stat == Statistic::NumParts ? k : k + p.red_parts();
}

// ---------------------------------------------------------------- CountTable

BigInt CountTable::get(int m, int n) const {
    auto it = entries_.find({m, n});
    return it == entries_.end() ? BigInt(0) : it->second;
}

void CountTable::add(int m, int n, const BigInt& v) {
    if (v == 0) return;
    auto [it, inserted] = entries_.try_emplace({m, n}, v);
    if (!inserted) {
        it->second += v;
        if (it->second == 0) entries_.erase(it);
    }
}

void CountTable::set(int m, int n, const BigInt& v) {
    if (v == 0)
        entries_.erase({m, n});
    else
        entries_[{m, n}] = v;
}

BigInt CountTable::total(int n) const {
    BigInt t = 0;
    for (const auto& [key, v] : entries_)
        if (key.second == n) t += v;
    return t;
}

TruncSeries CountTable::to_series() const {
    TruncSeries s(order_);
    for (const auto& [key, v] : entries_) s.add_to(key.second, key.first, BigRat(v));
    return s;
}

nlohmann::json CountTable::to_json() const {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [key, v] : entries_) {
        const std::string k = std::to_string(key.first) + "," + std::to_string(key.second);
        if (v.fits_slong_p())
            counts[k] = v.get_si();
        else
            counts[k] = v.get_str();
    }
    return {{"order", order_}, {"counts", counts}};
}

CountTable CountTable::from_json(const nlohmann::json& j) {
    CountTable t(j.at("order").get<int>());
    for (const auto& [k, v] : j.at("counts").items()) {
        const auto comma = k.find(',');
        if (comma == std::string::npos) throw ParseError("count key must be \"m,n\": " + k);
        const int m = std::stoi(k.substr(0, comma));
        const int n = std::stoi(k.substr(comma + 1));
        t.set(m, n, v.is_string() ? BigInt(v.get<std::string>()) : BigInt(v.get<long>()));
    }
    return t;
}

// ---------------------------------------------------------------- DP

namespace {

// Dense (m, n) grid of counts.
class Grid {
public:
    Grid() = default;
    Grid(int max_m, int order) : max_m_(max_m), order_(order), v_(static_cast<std::size_t>((max_m + 1) * (order + 1))) {}

    BigInt& at(int m, int n) { return v_[static_cast<std::size_t>(m * (order_ + 1) + n)]; }
    const BigInt& at(int m, int n) const { return v_[static_cast<std::size_t>(m * (order_ + 1) + n)]; }
    int max_m() const { return max_m_; }
    int order() const { return order_; }

    Grid& operator+=(const Grid& o) {
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
        return *this;
    }

    // this += o * x^dm q^dn
    void add_shifted(const Grid& o, int dm, int dn) {
        for (int m = 0; m + dm <= max_m_; ++m)
            for (int n = 0; n + dn <= order_; ++n) {
                const BigInt& v = o.at(m, n);
                if (v != 0) at(m + dm, n + dn) += v;
            }
    }

private:
    int max_m_ = 0;
    int order_ = 0;
    std::vector<BigInt> v_;
};

}  // namespace

CountTable count_gamma(const ForbiddenSet& forbidden, int order, Statistic stat) {
    if (order < 0) throw MathError("negative order");
    constexpr DiffMatrix mat = DiffMatrix::gamma();
    int max_parts = 0;
    while ((max_parts + 1) * (max_parts + 2) / 2 <= order) ++max_parts;
    const int max_m = stat == Statistic::NumParts ? max_parts : 2 * max_parts;

    Grid empty(max_m, order);
    empty.at(0, 0) = 1;
    // cumulative[s][c]: partitions whose largest part is t_c for some t <= s.
    std::vector<std::array<Grid, 3>> cumulative(static_cast<std::size_t>(order) + 1);
    for (auto& row : cumulative)
        for (auto& g : row) g = Grid(max_m, order);
    Grid total = empty;

    for (int s = 1; s <= order; ++s) {
        for (Color c : kColors) {
            const int ci = static_cast<int>(c);
            Grid& cum = cumulative[static_cast<std::size_t>(s)][static_cast<std::size_t>(ci)];
            cum = cumulative[static_cast<std::size_t>(s - 1)][static_cast<std::size_t>(ci)];
            if (forbidden.contains(Part{s, c})) continue;
            // Below the new largest part s_c sits either nothing or a largest
            // part t_c' with s - t >= gap(c', c).
            Grid below = empty;
            for (Color prev : kColors) {
                const int t = s - mat.min_gap(prev, c);
                if (t >= 1) below += cumulative[static_cast<std::size_t>(t)][static_cast<std::size_t>(static_cast<int>(prev))];
            }
            const int w = (stat == Statistic::Weighted && c == Color::R) ? 2 : 1;
            Grid f(max_m, order);
            f.add_shifted(below, w, s);
            cum += f;
            total += f;
        }
    }

    CountTable table(order);
    for (int m = 0; m <= max_m; ++m)
        for (int n = 0; n <= order; ++n) table.set(m, n, total.at(m, n));
    return table;
}

CountTable count_gamma(Variant v, int order, Statistic stat) { return count_gamma(forbidden_for(v), order, stat); }

CountTable count_gamma(Variant v, int order) { return count_gamma(v, order, default_statistic(v)); }

CountTable count_by_enumeration(Variant v, int order, Statistic stat, int cap) {
    CountTable table(order);
    const ForbiddenSet forbidden = forbidden_for(v);
    for (int n = 0; n <= order; ++n)
        for (const auto& p : enumerate_gamma(n, forbidden, cap)) table.add(statistic_of(p, stat), n, 1);
    return table;
}

// ---------------------------------------------------------------- systems

namespace {

PolyQX mono(int c, int qexp, int xexp) { return PolyQX::monomial(c, qexp, xexp); }

}  // namespace

std::vector<FuncEqSpec> q_system() {
    constexpr int kQ1 = 0, kQ2 = 1, kQ3 = 2;
    return {
        // Q1(x) = xq^2 Q3(xq^2) + xq Q3(xq) + xq Q2(xq) + Q1(xq)
        {{1, 0, kQ1}, {mono(-1, 2, 1), 2, kQ3}, {mono(-1, 1, 1), 1, kQ3}, {mono(-1, 1, 1), 1, kQ2}, {-1, 1, kQ1}},
        // Q2(x) = xq^2 Q3(xq^2) + xq Q2(xq) + Q1(xq)
        {{1, 0, kQ2}, {mono(-1, 2, 1), 2, kQ3}, {mono(-1, 1, 1), 1, kQ2}, {-1, 1, kQ1}},
        // Q3(x) = xq Q3(xq) + Q1(xq)
        {{1, 0, kQ3}, {mono(-1, 1, 1), 1, kQ3}, {-1, 1, kQ1}},
    };
}

FuncEqSpec untangled_q1() {
    const PolyQX one(1);
    return {
        {one, 0, 0},
        {-(one + mono(1, 1, 1) + mono(1, 2, 1)), 1, 0},
        {-(mono(1, 1, 1) * (one - mono(1, 1, 0) - mono(1, 3, 1))), 2, 0},
        {-(mono(1, 2, 1) * (one - mono(1, 2, 1))), 3, 0},
    };
}

FuncEqSpec untangled_q3() {
    const PolyQX one(1);
    return {
        {one, 0, 0},
        {-(one + mono(1, 1, 1) + mono(1, 2, 1)), 1, 0},
        {mono(1, 4, 2), 2, 0},
        {-(mono(1, 3, 1) * (one - mono(1, 2, 1))), 3, 0},
    };
}

bool q_system_check(const CountTable& q1, const CountTable& q2, const CountTable& q3) {
    const std::vector<TruncSeries> unknowns{q1.to_series(), q2.to_series(), q3.to_series()};
    for (const auto& eq : q_system())
        if (!funceq_check(unknowns, eq)) return false;
    return true;
}

bool q_system_check(int order) {
    return q_system_check(count_gamma(Variant::Q1, order), count_gamma(Variant::Q2, order),
                          count_gamma(Variant::Q3, order));
}

bool untangled_check(const CountTable& q1, const CountTable& q3) {
    return funceq_check(q1.to_series(), untangled_q1()) && funceq_check(q3.to_series(), untangled_q3());
}

bool untangled_check(int order) {
    return untangled_check(count_gamma(Variant::Q1, order), count_gamma(Variant::Q3, order));
}

// ---------------------------------------------------------------- pairs

namespace {

// Number of parts of each uncolored partition of n with parts >= min_part
// and consecutive gaps >= min_gap.
std::vector<int> gap_partitions(int n, int min_part, int min_gap) {
    std::vector<int> out;
    std::function<void(int, int, int)> rec = [&](int remaining, int max_size, int count) {
        if (remaining == 0) {
            out.push_back(count);
            return;
        }
        for (int s = std::min(remaining, max_size); s >= min_part; --s) rec(remaining - s, s - min_gap, count + 1);
    };
    rec(n, n, 0);
    return out;
}

}  // namespace

PairCount pair_partition_count(int n, PairVariant variant, int cap) {
    if (n > cap) throw CapExceeded(n, cap);
    PairCount out;
    if (n < 0) return out;
    const int mu_min = variant == PairVariant::RR1 ? 1 : 2;
    for (int k = 0; k <= n; ++k) {
        const auto lambdas = gap_partitions(k, 1, 1);
        const auto mus = gap_partitions(n - k, mu_min, 2);
        for (int a : lambdas)
            for (int b : mus) {
                out.total += 1;
                out.by_parts[a + b] += 1;
            }
    }
    return out;
}

}  // namespace qpi
