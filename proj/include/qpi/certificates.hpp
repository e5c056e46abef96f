#pragma once

/**
 * @file certificates.hpp
 * @brief Atomic relations among shifted S/T sums and linear-combination
 *        certificates built from them.
 *
 * A certificate is a list of (relation instance, rational-function multiplier)
 * pairs whose weighted sum, expanded symbol by symbol, equals a target
 * combination exactly. Since every atomic relation vanishes identically as a
 * series, a verified certificate proves the target vanishes too.
 *
 * find_certificate() is a search procedure and is never trusted: the result
 * is only reported after verify_certificate() accepts it.
 */

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "qpi/exactmath.hpp"
#include "qpi/multisum.hpp"
#include "qpi/qseries.hpp"

namespace qpi {

struct UnknownId : MathError {
    explicit UnknownId(std::string_view id) : MathError("unknown target id: " + std::string(id)) {}
};
struct NoCertificateInWindow : MathError {
    using MathError::MathError;
};

/// S_{a,b,c} or T_{a,b,c} as a formal symbol.
struct SymbolRef {
    Family family = Family::S;
    int a = 0;
    int b = 0;
    int c = 0;
    auto operator<=>(const SymbolRef&) const = default;

    SumSpec spec() const { return {family, a, b, c}; }
};

std::string to_string(const SymbolRef& s);

/// Finite sum of symbols of one family with RatFn coefficients; zero
/// coefficients are never stored.
class FormalComb {
public:
    explicit FormalComb(Family family = Family::S) : family_(family) {}

    Family family() const { return family_; }
    const std::map<SymbolRef, RatFn>& terms() const { return terms_; }
    RatFn coeff(const SymbolRef& s) const;
    bool is_zero() const { return terms_.empty(); }

    void add(const SymbolRef& s, const RatFn& c);
    FormalComb& add_scaled(const FormalComb& o, const RatFn& scale);

    friend bool operator==(const FormalComb&, const FormalComb&) = default;

private:
    Family family_;
    std::map<SymbolRef, RatFn> terms_;
};

std::string to_string(const FormalComb& f);

/// rel^index_{a,b,c} (family S) or its hatted analogue (family T).
struct RelationInstance {
    Family family = Family::S;
    int index = 1;
    std::array<int, 3> offset{0, 0, 0};
    auto operator<=>(const RelationInstance&) const = default;
};

std::string to_string(const RelationInstance& r);

inline constexpr int kRelationCount = 9;
// Largest amount any relation raises an index above its offset.
inline constexpr int kMaxRelationShift = 4;

/// Validated: the templates as confirmed by relation_series_check; rel^2 and
/// rel^3 step to (a+1,b+1,c+1) and (a+2,b+2,c+2).
/// AsPrinted: rel^2 and rel^3 with (a+1,b+3,c+1), (a+2,b+4,c+2) and
/// (a+1,b+1,c+3), (a+2,b+2,c+4). These do not vanish as series; the table
/// exists only to audit certificates transcribed against it.
enum class RelationTable { Validated, AsPrinted };

FormalComb expand_relation(const RelationInstance& inst, RelationTable table = RelationTable::Validated);

// Sum of coefficient * series over the terms. Coefficients must be
// polynomials.
TruncSeries evaluate_comb(const FormalComb& comb, MultisumEngine& engine);

bool relation_series_check(const RelationInstance& inst, MultisumEngine& engine,
                           RelationTable table = RelationTable::Validated);
bool relation_series_check(const RelationInstance& inst, int order, RelationTable table = RelationTable::Validated);

enum class TargetId { ProofA, ProofB, ProofC, ProofD, ProofE };

TargetId parse_target_id(std::string_view id);  // "proofA".."proofE"; throws UnknownId
std::string to_string(TargetId id);
FormalComb target_comb(TargetId id);
FormalComb target_comb(std::string_view id);

struct CertificateEntry {
    RelationInstance relation;
    RatFn multiplier;
    friend bool operator==(const CertificateEntry&, const CertificateEntry&) = default;
};

struct Certificate {
    Family family = Family::S;
    FormalComb target{Family::S};
    std::vector<CertificateEntry> entries;

    nlohmann::json to_json() const;
    static Certificate from_json(const nlohmann::json& j);
};

// The 14-entry certificate for proofD as originally published,
// with the proofD display as target. tests/data/proofD_certificate.json holds
// the same data.
Certificate transcribed_proofD_certificate();

// sum multiplier * expand(relation).
FormalComb certificate_combination(const Certificate& cert, RelationTable table = RelationTable::Validated);
bool verify_certificate(const Certificate& cert, RelationTable table = RelationTable::Validated);

/// Inclusive bounds on relation offsets.
struct Window {
    std::array<int, 3> lo{0, 0, 0};
    std::array<int, 3> hi{0, 0, 0};
    friend bool operator==(const Window&, const Window&) = default;
};

std::string to_string(const Window& w);

// Bounding box of the target's symbols, widened on each side by the largest
// relation shift plus `growth` (clipped at 0).
Window default_window(const FormalComb& target, int growth = 0);

struct SolverStats {
    std::size_t columns = 0;   // relation instances in the window
    std::size_t rows = 0;      // symbols touched
    std::size_t support = 0;   // entries in the certificate
    int windows_tried = 0;
    Window window;
};

/// Searches the window for a certificate; throws NoCertificateInWindow if the
/// target is not in the span of the window's relations.
Certificate find_certificate(const FormalComb& target, const Window& window, SolverStats* stats = nullptr);
// Default policy: default_window(target, g) for g = 0 .. max_retries.
Certificate find_certificate(const FormalComb& target, int max_retries = 3, SolverStats* stats = nullptr);

}  // namespace qpi
