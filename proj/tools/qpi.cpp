#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "qpi/certificates.hpp"
#include "qpi/multisum.hpp"
#include "qpi/partitions.hpp"
#include "qpi/pipeline.hpp"

using namespace qpi;

namespace {

void write_json(const std::string& path, const nlohmann::json& j) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

int finish(const Report& r, const RunConfig& cfg) {
    std::cout << r.to_text();
    write_json(cfg.output, r.to_json());
    return exit_code(r);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-series, colored partition and certificate verification tool"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    app.add_option("--json", cfg.output, "write the report or result as JSON");

    auto* all = app.add_subcommand("verify-all", "run every verification chain");
    all->add_option("--order", cfg.order, "truncation order")->check(CLI::NonNegativeNumber);
    all->add_option("--window-retries", cfg.window_retries, "certificate window growth steps");

    int which = 1;
    auto* theorem = app.add_subcommand("theorem", "verify one theorem chain");
    theorem->add_option("--which", which, "1 or 2")->check(CLI::IsMember({1, 2}));
    theorem->add_option("--order", cfg.order, "truncation order")->check(CLI::NonNegativeNumber);
    theorem->add_option("--window-retries", cfg.window_retries, "certificate window growth steps");

    auto* conj = app.add_subcommand("conjecture", "compare the weighted count with (1+yq) S_{3,0,1}(y)");
    conj->add_option("--order", cfg.order, "truncation order")->check(CLI::NonNegativeNumber);

    auto* sanity = app.add_subcommand("sanity", "Euler and Rogers-Ramanujan identities");
    sanity->add_option("--order", cfg.order, "truncation order")->check(CLI::NonNegativeNumber);

    int enum_n = 6;
    std::string forbid;
    auto* enumerate = app.add_subcommand("enumerate", "list the colored partitions of n");
    enumerate->add_option("--n", enum_n, "integer being partitioned")->required();
    enumerate->add_option("--forbid", forbid, "forbidden parts, e.g. 1R,2R,1B");
    enumerate->add_option("--cap", cfg.cap, "brute-force cap");

    std::string family = "S";
    std::vector<int> abc{0, 0, 0};
    std::string x_eval;
    auto* multisum = app.add_subcommand("multisum", "expand S_{a,b,c}(x) or T_{a,b,c}(x)");
    multisum->add_option("--family", family, "S or T");
    multisum->add_option("--abc", abc, "three non-negative integers")->expected(3)->check(CLI::NonNegativeNumber);
    multisum->add_option("--order", cfg.order, "truncation order")->check(CLI::NonNegativeNumber);
    multisum->add_option("--x-eval", x_eval, "substitute a rational for x");

    std::string target = "proofD";
    std::string in_path, out_path;
    auto* cert = app.add_subcommand("certificate", "find or check a linear-combination certificate");
    auto* find = cert->add_subcommand("find", "search for a certificate");
    find->add_option("--target", target, "proofA..proofE");
    find->add_option("--out", out_path, "write the certificate");
    find->add_option("--window-retries", cfg.window_retries, "window growth steps");
    auto* check = cert->add_subcommand("check", "verify a certificate");
    check->add_option("--target", target, "proofA..proofE; the file's target must match");
    check->add_option("--in", in_path, "certificate JSON")->required();
    cert->require_subcommand(1);
    cert->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*all) {
            cfg.command = "verify-all";
            return finish(verify_all(cfg), cfg);
        }
        if (*theorem) {
            cfg.command = "theorem";
            return finish(which == 1 ? verify_theorem1(cfg) : verify_theorem2(cfg), cfg);
        }
        if (*conj) {
            cfg.command = "conjecture";
            return finish(check_conjecture(cfg), cfg);
        }
        if (*sanity) {
            cfg.command = "sanity";
            return finish(sanity_classical(cfg), cfg);
        }
        if (*enumerate) {
            const auto parts = enumerate_gamma(enum_n, parse_forbidden(forbid), cfg.cap);
            nlohmann::json list = nlohmann::json::array();
            for (const auto& p : parts) {
                std::cout << p.to_string() << '\n';
                list.push_back(p.to_string());
            }
            std::cout << "count " << parts.size() << '\n';
            write_json(cfg.output, {{"n", enum_n}, {"count", parts.size()}, {"partitions", list}});
            return 0;
        }
        if (*multisum) {
            const SumSpec spec{parse_family(family), abc[0], abc[1], abc[2]};
            TruncSeries s = eval_multisum(spec, cfg.order);
            if (!x_eval.empty()) s = s.eval_x(parse_rational(x_eval));
            std::cout << to_string(spec) << " = " << to_string(s) << '\n';
            write_json(cfg.output, s.to_json());
            return 0;
        }
        if (*find) {
            SolverStats stats;
            try {
                const Certificate c = find_certificate(target_comb(target), cfg.window_retries, &stats);
                const bool ok = verify_certificate(c);
                std::cout << (ok ? "verified" : "NOT verified") << ": " << c.entries.size() << " entries, window "
                          << to_string(stats.window) << '\n';
                for (const auto& e : c.entries)
                    std::cout << "  (" << to_string(e.multiplier) << ") * " << to_string(e.relation) << '\n';
                write_json(out_path, c.to_json());
                write_json(cfg.output, c.to_json());
                return ok ? 0 : 2;
            } catch (const NoCertificateInWindow& e) {
                std::cout << "no certificate: " << e.what() << '\n';
                return 3;
            }
        }
        if (*check) {
            std::ifstream in(in_path);
            if (!in) throw std::runtime_error("cannot read " + in_path);
            const Certificate c = Certificate::from_json(nlohmann::json::parse(in));
            if (check->count("--target") && !(c.target == target_comb(target))) {
                std::cout << "certificate target does not match " << target << '\n';
                return 2;
            }
            const bool ok = verify_certificate(c);
            std::cout << (ok ? "verified" : "NOT verified") << '\n';
            return ok ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
