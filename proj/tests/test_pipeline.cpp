#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qpi/certificates.hpp"
#include "qpi/pipeline.hpp"

using namespace qpi;

namespace {

Check make_check(const std::string& name, bool passed, bool informational = false, bool exhausted = false) {
    Check c;
    c.name = name;
    c.passed = passed;
    c.informational = informational;
    c.window_exhausted = exhausted;
    return c;
}

bool is_certificate_check(const Check& c) { return c.name.rfind("certificate ", 0) == 0; }

void check_chain(const Report& r) {
    CHECK(!r.checks.empty());
    for (const Check& c : r.checks) {
        INFO(c.name << ": " << c.detail);
        if (c.informational) continue;
        if (is_certificate_check(c)) {
            if (c.passed) CHECK(verify_certificate(Certificate::from_json(c.data)));
            else CHECK(c.window_exhausted);
            continue;
        }
        if (c.name.rfind("transcribed", 0) == 0) continue;
        CHECK(c.passed);
    }
}

}  // namespace

TEST_CASE("exit codes") {
    Report r{"t", {make_check("a", true), make_check("b", false, true)}};
    CHECK(r.passed());
    CHECK(exit_code(r) == 0);
    r.checks.push_back(make_check("c", false));
    CHECK(exit_code(r) == 2);
    r.checks.push_back(make_check("d", false, false, true));
    CHECK(r.window_exhausted());
    CHECK(exit_code(r) == 3);
    Report only_window{"w", {make_check("d", false, false, true)}};
    CHECK(exit_code(only_window) == 3);
}

TEST_CASE("report rendering") {
    Report r{"t", {make_check("first", true), make_check("second", false)}};
    r.checks[1].mismatch = CoeffPos{4, 1};
    const nlohmann::json j = r.to_json();
    CHECK(j["title"] == "t");
    CHECK(j["passed"] == false);
    CHECK(j["checks"].size() == 2);
    CHECK(j["checks"][1]["mismatch"]["qexp"] == 4);
    const std::string text = r.to_text();
    CHECK(text.find("PASS first") != std::string::npos);
    CHECK(text.find("FAIL second") != std::string::npos);
    Report other{"u", {make_check("third", true)}};
    r.append(other);
    CHECK(r.checks.size() == 3);
}

TEST_CASE("initial conditions") {
    CHECK(initial_conditions_hold(pair_gf(PairVariant::RR1, 10)));
    CHECK_FALSE(initial_conditions_hold(TruncSeries::one(10) * BigRat(2)));
    CHECK_FALSE(initial_conditions_hold(TruncSeries(10)));
}

TEST_CASE("classical identities") {
    for (int order : {0, 1, 50}) {
        const Report r = sanity_classical(RunConfig{order});
        CHECK(r.passed());
        CHECK(exit_code(r) == 0);
    }
}

TEST_CASE("theorem chains") {
    RunConfig cfg;
    cfg.order = 24;
    cfg.window_retries = 0;
    const Report t1 = verify_theorem1(cfg), t2 = verify_theorem2(cfg);
    check_chain(t1);
    check_chain(t2);
    bool found_d = false;
    for (const Check& c : t2.checks)
        if (c.name == "certificate proofD") found_d = c.passed;
    CHECK(found_d);
}

TEST_CASE("order zero") {
    RunConfig cfg;
    cfg.order = 0;
    cfg.window_retries = 0;
    check_chain(verify_theorem1(cfg));
    CHECK(check_conjecture(cfg).passed());
}

TEST_CASE("conjecture") {
    RunConfig cfg;
    cfg.order = 20;
    const Report r = check_conjecture(cfg);
    CHECK(r.passed());
    CHECK(r.to_json()["checks"][0]["passed"] == true);
}
