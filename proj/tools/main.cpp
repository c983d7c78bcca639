// Experiment driver: run named or file-based configs, re-verify stored
// reports, list the catalog, and expose the brute-force oracles directly.
// Exit codes: 0 all mandatory checks pass, 1 a check or verification failed,
// 2 usage/config errors.

#include <cstdio>
#include <exception>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "multimin/experiments.hpp"
#include "multimin/io.hpp"
#include "multimin/roots.hpp"

namespace {

multimin::Point parse_point(const std::string& text) {
    multimin::Point p;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) p.push_back(std::stod(cell));
    if (p.empty()) throw multimin::experiments::ConfigError("empty point literal");
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace multimin;
    using namespace multimin::experiments;

    CLI::App app{"multimin: multiplicity experiments for non-convex minimization problems"};
    app.require_subcommand(1);

    std::string config_name;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
    double budget_scale = 1.0;

    auto* run_cmd = app.add_subcommand("run", "run an experiment config (catalog name or JSON path)");
    run_cmd->add_option("config", config_name, "catalog name or path to a config JSON")->required();
    run_cmd->add_option("--out", out_dir, "output directory for the report and artifacts");
    run_cmd->add_option("--seed", seed, "seed override")->each([&](const std::string&) { seed_set = true; });
    run_cmd->add_option("--threads", threads, "worker threads for candidate evaluation");
    run_cmd->add_option("--budget-scale", budget_scale, "multiplier on search budgets");

    std::string report_path;
    auto* verify_cmd = app.add_subcommand("verify", "re-run the oracle checks against a stored report");
    verify_cmd->add_option("report", report_path, "path to report.json")->required();

    auto* list_cmd = app.add_subcommand("list", "list the bundled experiment catalog");

    auto* oracle_cmd = app.add_subcommand("oracle", "direct brute-force tools");
    oracle_cmd->require_subcommand(1);

    std::string set_path, point_text;
    auto* dist_cmd = oracle_cmd->add_subcommand("dist", "distance from a point to a sampled set");
    dist_cmd->add_option("set", set_path, "SetSpec CSV path")->required();
    dist_cmd->add_option("point", point_text, "comma-separated coordinates")->required();

    std::string j_name = "sin";
    double a = 0.0, b = 0.0;
    std::vector<double> interval{-10.0, 10.0};
    std::size_t brackets = 400;
    auto* roots_cmd = oracle_cmd->add_subcommand("roots", "bisection scan of x + a J'(x) = b");
    roots_cmd->add_option("J", j_name, "builtin name or expression for J")->required();
    roots_cmd->add_option("a", a, "multiplier of J'")->required();
    roots_cmd->add_option("b", b, "right-hand side")->required();
    roots_cmd->add_option("--interval", interval, "search interval hint")->expected(2);
    roots_cmd->add_option("--brackets", brackets, "number of bisection brackets");

    double eps_s = 1e-3;
    auto* cluster_cmd = oracle_cmd->add_subcommand("cluster", "single-linkage cluster count of a sampled set");
    cluster_cmd->add_option("set", set_path, "SetSpec CSV path")->required();
    cluster_cmd->add_option("eps", eps_s, "separation threshold")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run_cmd) {
            RunOptions opts;
            opts.out_dir = out_dir;
            opts.threads = threads;
            opts.budget_scale = budget_scale;
            if (seed_set) opts.seed_override = seed;
            const Json config = load_config(config_name);
            const RunResult res = run_experiment(config, opts);
            std::printf("report: %s\n", res.report_path.c_str());
            for (const auto& row : res.report.at("checks")) {
                std::printf("  [%s] %s%s\n", row.at("pass").get<bool>() ? "pass" : "FAIL",
                            row.at("name").get<std::string>().c_str(),
                            row.at("mandatory").get<bool>() ? "" : " (informational)");
            }
            for (const auto& w : res.report.at("warnings")) {
                std::printf("  warning: %s\n", w.get<std::string>().c_str());
            }
            std::printf("elapsed: %.3f s\n", res.seconds);
            return res.pass ? 0 : 1;
        }
        if (*verify_cmd) {
            const VerifyResult res = verify_report_file(report_path);
            for (const auto& msg : res.messages) std::printf("  %s\n", msg.c_str());
            if (res.zero_witnesses) std::printf("verify: true (warning: report carries no witnesses)\n");
            else std::printf("verify: %s\n", res.ok ? "true" : "false");
            return res.ok ? 0 : 1;
        }
        if (*list_cmd) {
            for (const auto& entry : catalog()) {
                std::printf("%-18s %s\n", entry.at("name").get<std::string>().c_str(),
                            entry.at("kind").get<std::string>().c_str());
            }
            return 0;
        }
        if (*dist_cmd) {
            const SetSpec X = read_set_csv(set_path);
            std::printf("%.17g\n", dist_to_set(parse_point(point_text), X));
            return 0;
        }
        if (*roots_cmd) {
            const ScalarFunction J = named_function(j_name);
            const auto scan = scalar_root_scan(J, a, b, interval[0], interval[1], brackets);
            std::printf("interval [%g, %g], %zu roots:\n", scan.lo, scan.hi, scan.roots.size());
            for (double r : scan.roots) std::printf("  %.15g\n", r);
            return 0;
        }
        if (*cluster_cmd) {
            const SetSpec X = read_set_csv(set_path);
            const auto clusters = cluster_points(X.samples, eps_s);
            std::printf("%zu clusters at eps = %g\n", clusters.size(), eps_s);
            return 0;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
