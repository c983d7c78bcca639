#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "multimin/experiments.hpp"
#include "multimin/io.hpp"

using namespace multimin;
using namespace multimin::experiments;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() / ("multimin_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

}  // namespace

TEST_CASE("catalog") {
    CHECK(catalog_names().size() == 14);
    for (const auto& name : catalog_names()) {
        const Json c = catalog_config(name);
        CHECK(c.at("name") == name);
        CHECK(c.contains("kind"));
        CHECK(c.contains("seed"));
        CHECK(c.contains("params"));
    }
    CHECK_THROWS_AS(catalog_config("nonexistent"), ConfigError);
}

TEST_CASE("config loading and schema validation") {
    SECTION("catalog names resolve") {
        CHECK(load_config("thm110_twopoint").at("kind") == "chebyshev");
    }

    SECTION("config files load") {
        const std::string dir = temp_dir("cfg");
        const std::string path = dir + "/c.json";
        std::ofstream(path) << catalog_config("thm22_tilt").dump();
        CHECK(load_config(path).at("name") == "thm22_tilt");
    }

    SECTION("unknown names are config errors") {
        CHECK_THROWS_AS(load_config("no_such_config_or_file"), ConfigError);
    }

    SECTION("an empty config is a schema error") {
        CHECK_THROWS_AS(validate_config_shape(Json::object()), ConfigError);
        CHECK_THROWS_AS(validate_config_shape(Json{{"kind", "chebyshev"}}), ConfigError);
        CHECK_THROWS_AS(validate_config_shape(Json{{"kind", "bogus"}, {"name", "x"}, {"seed", 1}, {"params", Json::object()}}),
                        ConfigError);
    }
}

TEST_CASE("two-point experiment end to end") {
    RunOptions opts;
    opts.out_dir = temp_dir("twopoint");
    const auto res = run_experiment(catalog_config("thm110_twopoint"), opts);
    REQUIRE(res.pass);

    SECTION("the witness JSON carries the pinned fields") {
        const Json& w = res.report.at("results").at("witness");
        REQUIRE(w.contains("y0"));
        REQUIRE(w.contains("radius"));
        REQUIRE(w.contains("clusters"));
        REQUIRE(w.contains("margin"));
        REQUIRE(w.contains("verified"));
        CHECK(w.at("y0").at(0).get<double>() == Catch::Approx(0.025).margin(1e-6));
        CHECK(w.at("verified").get<bool>());
        CHECK(w.at("clusters").size() == 2);
        for (const auto& c : w.at("clusters")) {
            CHECK(c.contains("representative"));
            CHECK(c.contains("value"));
        }
    }

    SECTION("the sampled set is exported as CSV") {
        CHECK(std::filesystem::exists(opts.out_dir + "/set.csv"));
        const SetSpec round = read_set_csv(opts.out_dir + "/set.csv");
        CHECK(round.samples.size() == 2);
        CHECK(round.kind == SetKind::PointCloud);
    }

    SECTION("verification passes on the fresh report") {
        CHECK(verify_report(res.report).ok);
        CHECK(verify_report_file(res.report_path).ok);
    }

    SECTION("a perturbed witness is rejected by the oracle") {
        Json tampered = res.report;
        tampered["results"]["witness"]["y0"][0] = 0.035;  // off the tie point
        const auto ver = verify_report(tampered);
        CHECK_FALSE(ver.ok);
    }
}

TEST_CASE("parametric sets round-trip with their sidecar") {
    RunOptions opts;
    opts.out_dir = temp_dir("circle_csv");
    const auto res = run_experiment(catalog_config("thm110_circle"), opts);
    REQUIRE(res.pass);
    CHECK(std::filesystem::exists(opts.out_dir + "/set.csv"));
    CHECK(std::filesystem::exists(opts.out_dir + "/set.params.json"));
    const SetSpec round = read_set_csv(opts.out_dir + "/set.csv");
    CHECK(round.kind == SetKind::ParametricCurve);
    CHECK(round.params.size() == 720);
    CHECK(round.samples.size() == 720);
}

TEST_CASE("reports are byte-identical across reruns") {
    for (const std::string name : {"thm110_twopoint", "thm22_tilt", "rem23_scalar"}) {
        RunOptions a, b;
        a.out_dir = temp_dir(name + "_a");
        b.out_dir = temp_dir(name + "_b");
        run_experiment(catalog_config(name), a);
        run_experiment(catalog_config(name), b);
        CHECK(slurp(a.out_dir + "/report.json") == slurp(b.out_dir + "/report.json"));
    }
}

TEST_CASE("seed override changes the echoed config") {
    RunOptions opts;
    opts.out_dir = temp_dir("seed");
    opts.seed_override = 999;
    const auto res = run_experiment(catalog_config("prop21_random"), opts);
    CHECK(res.report.at("config").at("seed").get<std::uint64_t>() == 999);
    CHECK(res.pass);
}

TEST_CASE("scalar-root report verification notices perturbed roots") {
    RunOptions opts;
    opts.out_dir = temp_dir("rem23");
    const auto res = run_experiment(catalog_config("rem23_scalar"), opts);
    REQUIRE(res.pass);
    CHECK(verify_report(res.report).ok);

    Json tampered = res.report;
    const double r0 = tampered["results"]["roots"][0].get<double>();
    tampered["results"]["roots"][0] = r0 + 1e-2;
    CHECK_FALSE(verify_report(tampered).ok);
}

TEST_CASE("kirchhoff report verification re-runs the residual oracle") {
    RunOptions opts;
    opts.out_dir = temp_dir("kirchhoff_small");
    Json config = catalog_config("thm210_eigen");
    // small instance for the unit suite; the acceptance suite runs the full one
    config["params"]["n"] = 80;
    config["params"]["starts"] = 16;
    config["params"].erase("doubling");
    const auto res = run_experiment(config, opts);
    REQUIRE(res.pass);
    CHECK(verify_report(res.report).ok);
    CHECK(std::filesystem::exists(opts.out_dir + "/state_000.csv"));

    Json tampered = res.report;
    Json& u = tampered["results"]["witness"]["states"][0]["u"];
    u[10] = u[10].get<double>() + 0.01;
    CHECK_FALSE(verify_report(tampered).ok);
}

TEST_CASE("validation reports verify with a no-witness warning") {
    RunOptions opts;
    opts.out_dir = temp_dir("validate");
    const auto res = run_experiment(catalog_config("thm27_validate"), opts);
    REQUIRE(res.pass);
    const auto ver = verify_report(res.report);
    CHECK(ver.ok);
    CHECK(ver.zero_witnesses);
}

TEST_CASE("oscillation-margin experiment carries the strict-inequality bridge") {
    RunOptions opts;
    opts.out_dir = temp_dir("cond2");
    const auto res = run_experiment(catalog_config("thm21_condition2"), opts);
    REQUIRE(res.pass);
    const Json& results = res.report.at("results");
    CHECK(results.at("margin").get<double>() == Catch::Approx(1.0).margin(1e-9));
    CHECK(results.at("bridge_sup_inf").get<double>() < results.at("bridge_inf_sup").get<double>());
}

TEST_CASE("minimax rows are appended to the jsonl artifact") {
    RunOptions opts;
    opts.out_dir = temp_dir("gaps");
    const auto res = run_experiment(catalog_config("thm23_gap"), opts);
    REQUIRE(res.pass);
    const std::string rows = slurp(opts.out_dir + "/rows.jsonl");
    CHECK(rows.find("bilinear_two_point") != std::string::npos);
    CHECK(rows.find("quadratic_tilt_refined") != std::string::npos);
}

TEST_CASE("unwritable output directories are config errors") {
    const std::string dir = temp_dir("blocked");
    std::ofstream(dir + "/file") << "x";
    RunOptions opts;
    opts.out_dir = dir + "/file/sub";  // a file cannot be a directory
    CHECK_THROWS_AS(run_experiment(catalog_config("thm22_tilt"), opts), ConfigError);
}

TEST_CASE("malformed report files raise config errors") {
    const std::string dir = temp_dir("malformed");
    const std::string path = dir + "/report.json";
    std::ofstream(path) << "{not json";
    CHECK_THROWS_AS(verify_report_file(path), ConfigError);
    CHECK_THROWS_AS(verify_report_file(dir + "/missing.json"), ConfigError);
    CHECK_THROWS_AS(verify_report(Json{{"schema", "other"}}), ConfigError);
}
