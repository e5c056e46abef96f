#pragma once

// End-to-end verification chains for the two theorems, the conjecture
// comparison, and the classical identities the chains lean on.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qpi/partitions.hpp"
#include "qpi/qseries.hpp"

namespace qpi {

struct RunConfig {
    int order = 60;
    int cap = kDefaultBruteForceCap;
    int window_retries = 3;
    std::string output;   // JSON report path, empty for none
    std::string command;  // CLI subcommand that produced the run
};

struct Check {
    std::string name;
    bool passed = false;
    // Informational checks are reported but do not affect the verdict.
    bool informational = false;
    bool window_exhausted = false;
    std::optional<CoeffPos> mismatch;
    std::string detail;
    double seconds = 0;
    nlohmann::json data;  // e.g. a found certificate
};

struct Report {
    std::string title;
    std::vector<Check> checks;

    bool passed() const;
    bool window_exhausted() const;
    void append(const Report& other);
    nlohmann::json to_json() const;
    // One line per check.
    std::string to_text() const;
};

// 0 when everything passes, 3 if a certificate search ran out of windows,
// 2 for any other failure.
int exit_code(const Report& r);

Report verify_theorem1(const RunConfig& cfg);
Report verify_theorem2(const RunConfig& cfg);
Report check_conjecture(const RunConfig& cfg);
Report sanity_classical(const RunConfig& cfg);
Report verify_all(const RunConfig& cfg);

// Both the q^0 coefficient and the x^0 slice equal 1.
bool initial_conditions_hold(const TruncSeries& s);

}  // namespace qpi
