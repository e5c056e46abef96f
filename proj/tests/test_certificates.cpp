#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>

#include "oracle.hpp"
#include "qpi/certificates.hpp"

using namespace qpi;
using namespace qpi::oracle;

namespace {

RatFn R(const char* s) { return parse_ratfn(s); }

std::vector<OracleTerm> to_oracle(const FormalComb& comb) {
    std::vector<OracleTerm> out;
    for (const auto& [sym, c] : comb.terms()) {
        REQUIRE(c.is_polynomial());
        OracleTerm t{sym.spec(), {}};
        for (const auto& [m, v] : c.num().terms()) {
            REQUIRE(v.get_den() == 1);
            t.coeff.push_back({m.q, m.x, v.get_num().get_si()});
        }
        out.push_back(t);
    }
    return out;
}

// Oracle check that a polynomial-coefficient combination vanishes through q^N.
bool vanishes(const FormalComb& comb, int N) { return all_zero(combination_oracle(to_oracle(comb), N)); }

FormalComb negated(const FormalComb& f) {
    FormalComb out(f.family());
    out.add_scaled(f, RatFn(-1));
    return out;
}

Certificate load_fixture() {
    std::ifstream in(std::string(QPI_TEST_DATA) + "/proofD_certificate.json");
    REQUIRE(in.good());
    return Certificate::from_json(nlohmann::json::parse(in));
}

}  // namespace

TEST_CASE("relation expansions") {
    FormalComb rel1(Family::S);
    rel1.add({Family::S, 1, 0, 2}, R("1"));
    rel1.add({Family::S, 3, 0, 2}, R("-1"));
    rel1.add({Family::S, 4, 1, 3}, R("-x^2*q^2"));
    rel1.add({Family::S, 5, 2, 4}, R("-x^2*q^3"));
    CHECK(expand_relation({Family::S, 1, {1, 0, 2}}) == rel1);

    FormalComb hat4(Family::T);
    hat4.add({Family::T, 0, 1, 0}, R("1"));
    hat4.add({Family::T, 1, 2, 1}, R("-(1 + x*q)"));
    hat4.add({Family::T, 3, 4, 3}, R("-x*q"));
    hat4.add({Family::T, 1, 2, 3}, R("-x*q^2"));
    CHECK(expand_relation({Family::T, 4, {0, 1, 0}}) == hat4);

    FormalComb rel2(Family::S);
    rel2.add({Family::S, 0, 0, 0}, R("1"));
    rel2.add({Family::S, 0, 2, 0}, R("-1"));
    rel2.add({Family::S, 1, 1, 1}, R("-x*q"));
    rel2.add({Family::S, 2, 2, 2}, R("-x*q^2"));
    CHECK(expand_relation({Family::S, 2, {0, 0, 0}}) == rel2);

    CHECK_THROWS(expand_relation({Family::S, 10, {0, 0, 0}}));
    CHECK_THROWS(expand_relation({Family::S, 1, {0, -1, 0}}));
    CHECK(to_string(RelationInstance{Family::T, 4, {0, 1, 0}}).find('4') != std::string::npos);
}

TEST_CASE("every relation vanishes against the direct-sum oracle") {
    for (Family f : {Family::S, Family::T})
        for (int r = 1; r <= kRelationCount; ++r)
            for (const auto& off : std::vector<std::array<int, 3>>{{0, 0, 0}, {1, 0, 2}, {0, 2, 1}})
                CHECK(vanishes(expand_relation({f, r, off}), 16));
}

TEST_CASE("every relation vanishes on a grid") {
    MultisumEngine engine(30);
    for (Family f : {Family::S, Family::T})
        for (int r = 1; r <= kRelationCount; ++r)
            for (int a = 0; a <= 2; ++a)
                for (int b = 0; b <= 2; ++b)
                    for (int c = 0; c <= 2; ++c) CHECK(relation_series_check({f, r, {a, b, c}}, engine));
}

TEST_CASE("as-printed second and third relations do not vanish") {
    for (Family f : {Family::S, Family::T})
        for (int r : {2, 3}) {
            const RelationInstance inst{f, r, {0, 0, 0}};
            CHECK_FALSE(relation_series_check(inst, 20, RelationTable::AsPrinted));
            CHECK_FALSE(vanishes(expand_relation(inst, RelationTable::AsPrinted), 20));
        }
    for (int r : {1, 4, 5, 6, 7, 8, 9})
        CHECK(expand_relation({Family::S, r, {1, 1, 1}}, RelationTable::AsPrinted) ==
              expand_relation({Family::S, r, {1, 1, 1}}));
}

TEST_CASE("a mutated relation is rejected") {
    FormalComb rel = expand_relation({Family::S, 1, {0, 0, 0}});
    rel.add({Family::S, 3, 1, 1}, R("x^2*q"));
    rel.add({Family::S, 3, 1, 1}, R("-x^2*q^2"));
    MultisumEngine engine(20);
    CHECK_FALSE(evaluate_comb(rel, engine).is_zero());
    CHECK_FALSE(vanishes(rel, 20));
}

TEST_CASE("targets") {
    CHECK(parse_target_id("proofC") == TargetId::ProofC);
    CHECK(to_string(TargetId::ProofE) == "proofE");
    CHECK_THROWS_AS(parse_target_id("proofF"), UnknownId);
    CHECK(target_comb("proofA").family() == Family::S);
    CHECK(target_comb("proofD").family() == Family::T);
    MultisumEngine s(40), t(40);
    for (TargetId id : {TargetId::ProofA, TargetId::ProofB, TargetId::ProofC, TargetId::ProofD, TargetId::ProofE}) {
        const FormalComb comb = target_comb(id);
        CHECK(evaluate_comb(comb, comb.family() == Family::S ? s : t).is_zero());
        CHECK(vanishes(comb, 24));
    }
}

TEST_CASE("transcribed certificate") {
    const Certificate fixture = load_fixture();
    const Certificate built = transcribed_proofD_certificate();
    CHECK(fixture.family == Family::T);
    CHECK(fixture.target == target_comb(TargetId::ProofD));
    CHECK(fixture.entries == built.entries);
    CHECK(fixture.entries.size() == 14);
    CHECK_FALSE(verify_certificate(fixture));
    CHECK(certificate_combination(fixture, RelationTable::AsPrinted) == negated(fixture.target));
    CHECK_FALSE(verify_certificate(fixture, RelationTable::AsPrinted));
    const Certificate round = Certificate::from_json(fixture.to_json());
    CHECK(round.entries == fixture.entries);
    CHECK(round.target == fixture.target);
}

TEST_CASE("certificate search") {
    const FormalComb target = target_comb(TargetId::ProofD);
    const Window w{{2, 0, 1}, {5, 3, 4}};
    SolverStats stats;
    const Certificate cert = find_certificate(target, w, &stats);
    CHECK(verify_certificate(cert));
    CHECK(certificate_combination(cert) == target);
    CHECK(stats.support == cert.entries.size());
    CHECK(stats.columns > 0);
    for (const auto& e : cert.entries) {
        CHECK(relation_series_check(e.relation, 24));
        for (int i = 0; i < 3; ++i) {
            CHECK(e.relation.offset[i] >= w.lo[i]);
            CHECK(e.relation.offset[i] <= w.hi[i]);
        }
    }

    // Removing any entry or flipping a sign breaks the certificate.
    for (std::size_t i = 0; i < cert.entries.size(); ++i) {
        Certificate dropped = cert;
        dropped.entries.erase(dropped.entries.begin() + static_cast<std::ptrdiff_t>(i));
        CHECK_FALSE(verify_certificate(dropped));
        Certificate flipped = cert;
        flipped.entries[i].multiplier = -flipped.entries[i].multiplier;
        CHECK_FALSE(verify_certificate(flipped));
    }

    const Certificate again = Certificate::from_json(cert.to_json());
    CHECK(verify_certificate(again));

    SolverStats policy;
    CHECK(verify_certificate(find_certificate(target, 3, &policy)));
    CHECK(policy.windows_tried >= 1);
}

TEST_CASE("trivial and unreachable targets") {
    const Certificate empty = find_certificate(FormalComb(Family::T), Window{{0, 0, 0}, {1, 1, 1}});
    CHECK(empty.entries.empty());
    CHECK(verify_certificate(empty));

    FormalComb lone(Family::S);
    lone.add({Family::S, 1, 1, 1}, R("1"));
    CHECK_THROWS_AS(find_certificate(lone, Window{{0, 0, 0}, {2, 2, 2}}), NoCertificateInWindow);
}

TEST_CASE("default windows") {
    const Window w0 = default_window(target_comb(TargetId::ProofD), 0);
    CHECK(w0.lo == std::array<int, 3>{0, 0, 0});
    CHECK(w0.hi == std::array<int, 3>{5 + kMaxRelationShift, 3 + kMaxRelationShift, 4 + kMaxRelationShift});
    const Window w1 = default_window(target_comb(TargetId::ProofD), 1);
    CHECK(w1.hi[0] == w0.hi[0] + 1);
    CHECK(!to_string(w0).empty());
}
