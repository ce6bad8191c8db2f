#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ncg/json_io.hpp"
#include "ncg/rng.hpp"

#include <sys/wait.h>

using namespace ncg;

namespace {

std::string binary_path() {
#ifdef NCG_VERIFY_BIN
    return NCG_VERIFY_BIN;
#else
    const char* p = std::getenv("NCG_VERIFY_BIN");
    REQUIRE_MESSAGE(p != nullptr, "NCG_VERIFY_BIN must point at the CLI");
    return p;
#endif
}

// run the CLI and return its exit code (no pipes: they would mask it)
int run_cli(const std::string& args) {
    const std::string cmd =
        binary_path() + " " + args + " >/tmp/ncg_cli_stdout.txt 2>/tmp/ncg_cli_stderr.txt";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream is(path);
    REQUIRE(is.good());
    nlohmann::json j;
    is >> j;
    return j;
}

std::string read_text(const std::string& path) {
    std::ifstream is(path);
    REQUIRE(is.good());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("element json round trip preserves evaluated amplitudes bitwise") {
    SplitMix64 rng(0x0123fedcu);
    for (double ang : {0.0, 1.0, 1.4142135623730951}) {
        const DeformationAngle theta{ang};
        for (int trial = 0; trial < 40; ++trial) {
            const AlgebraElement a = random_element(theta, 5, rng);
            const nlohmann::json j = element_to_json(a);
            const AlgebraElement back = element_from_json(j);
            CHECK(back.theta() == theta);
            CHECK(exactly_equal(back, a));
            // serialized text itself round trips too (shortest-repr doubles)
            const AlgebraElement twice =
                element_from_json(nlohmann::json::parse(j.dump()));
            CHECK(exactly_equal(twice, a));
        }
    }
}

TEST_CASE("report json carries exactly the declared fields") {
    const AxiomReport r = make_report("first-order", 3.25e-13, 1e-12, 24, 8);
    const nlohmann::json j = report_to_json(r);
    CHECK(j.size() == 5);
    CHECK(j.at("axiom") == "first-order");
    CHECK(j.at("residual").get<double>() == 3.25e-13);
    CHECK(j.at("pass").get<bool>());
    CHECK(j.at("window").get<int>() == 24);
    CHECK(j.at("guard").get<int>() == 8);

    const AxiomReport back = report_from_json(j);
    CHECK(back.axiom == r.axiom);
    CHECK(back.residual == r.residual);
    CHECK(back.pass == r.pass);
    CHECK(back.window == r.window);
    CHECK(back.guard == r.guard);
}

TEST_CASE("tower json round trip") {
    TowerSpec t;
    t.theta0 = 1.25;
    t.levels = {{2, 3, 1}, {1, 1, -2}, {5, 2, 0}};
    const TowerSpec back = tower_from_json(tower_to_json(t));
    CHECK(back.theta0 == t.theta0);
    REQUIRE(back.levels.size() == t.levels.size());
    for (std::size_t i = 0; i < t.levels.size(); ++i) {
        CHECK(back.levels[i].m == t.levels[i].m);
        CHECK(back.levels[i].n == t.levels[i].n);
        CHECK(back.levels[i].k == t.levels[i].k);
    }
}

TEST_CASE("csv writers emit headers and well-formed rows") {
    const std::vector<SpectralPoint> pts = {{-1.5, 2}, {0.0, 2}, {1.5, 2}};
    const std::string csv = spectrum_to_csv(pts);
    CHECK(csv.rfind("eigenvalue,multiplicity\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

    const std::string rows = stream_to_csv({0.5, 0.25});
    CHECK(rows.rfind("index,value\n", 0) == 0);
    CHECK(rows.find("1,0.5") != std::string::npos);
    CHECK(rows.find("2,0.25") != std::string::npos);
}

TEST_CASE("usage errors exit with code two") {
    CHECK(run_cli("") == 2);                      // missing subcommand
    CHECK(run_cli("no-such-command") == 2);       // unknown subcommand
    CHECK(run_cli("spectrum --bogus-flag 1") == 2);
    CHECK(run_cli("report /tmp/ncg_missing_file.json") == 2);
    CHECK(run_cli("--help") == 0);                // help is a success path
    CHECK(run_cli("spectrum --help") == 0);
}

TEST_CASE("spectrum subcommand verifies and writes both formats") {
    CHECK(run_cli("spectrum --m 2 --n 3 --tau-re 0.5 --window 8 "
                  "--out /tmp/ncg_spec.json") == 0);
    const nlohmann::json j = read_json("/tmp/ncg_spec.json");
    CHECK(j.at("cross_residual").get<double>() <= 1e-10);
    CHECK(j.at("window").get<int>() == 8);
    CHECK(j.at("points").is_array());
    CHECK(j.at("points").size() > 0);
    CHECK(j.at("points").at(0).at("multiplicity").get<int>() >= 1);

    CHECK(run_cli("spectrum --window 6 --format csv --out /tmp/ncg_spec.csv") == 0);
    const std::string csv = read_text("/tmp/ncg_spec.csv");
    CHECK(csv.rfind("eigenvalue,multiplicity\n", 0) == 0);
}

TEST_CASE("verify-circle gates honestly on the requested tolerance") {
    CHECK(run_cli("verify-circle --grid 512 --fold 3 --out /tmp/ncg_circ.json") == 0);
    const nlohmann::json j = read_json("/tmp/ncg_circ.json");
    CHECK(j.at("pass").get<bool>());
    CHECK(j.at("axiom").get<std::string>() == "circle-cover-completeness");
    CHECK(j.at("residual").get<double>() < 1e-12);

    // an impossible tolerance must fail with exit code one, not be clipped
    CHECK(run_cli("verify-circle --grid 512 --fold 3 --tolerance 1e-30") == 1);
}

TEST_CASE("verify-torus-cover emits the derived tolerance alongside the gate") {
    CHECK(run_cli("verify-torus-cover --theta 1 --m 2 --n 1 --cutoff 64 "
                  "--grid 512 --tolerance 1e-6 --out /tmp/ncg_cover.json") == 0);
    const nlohmann::json j = read_json("/tmp/ncg_cover.json");
    CHECK(j.at("report").at("pass").get<bool>());
    CHECK(j.at("derived_tolerance").get<double>() > 0.0);
    CHECK_FALSE(j.at("cutoff_warning").get<bool>());
    CHECK(j.at("tail_l1_u").get<double>() < 1e-6);
}

TEST_CASE("verify-triple-axioms bundles the per-pair residuals") {
    CHECK(run_cli("verify-triple-axioms --theta 1 --window 12 --guard 4 "
                  "--pairs 1 --seed 7 --out /tmp/ncg_triple.json") == 0);
    const nlohmann::json j = read_json("/tmp/ncg_triple.json");
    CHECK(j.at("pass").get<bool>());
    CHECK(j.at("results").is_array());
    // five sign-table reports plus first-order and commutant checks per pair
    CHECK(j.at("results").size() == 7);
    for (const auto& r : j.at("results")) {
        CHECK(r.at("pass").get<bool>());
        CHECK(r.at("residual").get<double>() <= 1e-9);
    }
}

TEST_CASE("coherent-tower accepts a tower file and reports links") {
    TowerSpec t;
    t.theta0 = 0.0;
    t.levels = {{2, 1, 0}, {1, 2, 0}};
    {
        std::ofstream os("/tmp/ncg_tower_in.json");
        os << tower_to_json(t).dump(2);
    }
    CHECK(run_cli("coherent-tower --tower /tmp/ncg_tower_in.json --cutoff 48 "
                  "--grid 256 --out /tmp/ncg_tower.json") == 0);
    const nlohmann::json j = read_json("/tmp/ncg_tower.json");
    CHECK(j.at("coherence").at("pass").get<bool>());
    CHECK(j.at("coherence").at("links").size() == 2);
    // truncation floor at this cutoff is ~2e-8; precision lives in the
    // library tests, this exercises the plumbing
    CHECK(j.at("trajectory").at("summed_constancy").get<double>() <= 1e-6);
    CHECK(j.at("tower").at("levels").size() == 2);
}

TEST_CASE("dixmier subcommand gates against an expected value") {
    CHECK(run_cli("dixmier --lambda-max 1e4 --expected 0.15915494309189535 "
                  "--tolerance 0.05 --out /tmp/ncg_dix.json") == 0);
    const nlohmann::json j = read_json("/tmp/ncg_dix.json");
    CHECK(j.at("value").get<double>() > 0.0);
    CHECK(j.at("relative_error").get<double>() <= 0.05);
    CHECK(j.at("lambda_max").get<double>() == 1e4);

    // csv format streams the singular values
    CHECK(run_cli("dixmier --lambda-max 1e3 --format csv --out /tmp/ncg_dix.csv") == 0);
    const std::string csv = read_text("/tmp/ncg_dix.csv");
    CHECK(csv.rfind("index,value\n", 0) == 0);
}

TEST_CASE("report subcommand round trips a synthetic campaign") {
    nlohmann::json results = nlohmann::json::array();
    results.push_back(report_to_json(make_report("alpha", 1e-13, 1e-12, 16, 4)));
    results.push_back(report_to_json(make_report("beta", 2e-13, 1e-12)));
    nlohmann::json campaign{{"schema", campaign_schema},
                            {"created_utc", "2026-01-01T00:00:00Z"},
                            {"seed", 1},
                            {"workers", 1},
                            {"results", results},
                            {"pass", true}};
    {
        std::ofstream os("/tmp/ncg_campaign.json");
        os << campaign.dump(2);
    }
    CHECK(run_cli("report /tmp/ncg_campaign.json --out /tmp/ncg_summary.json") == 0);
    const nlohmann::json s = read_json("/tmp/ncg_summary.json");
    CHECK(s.at("total").get<int>() == 2);
    CHECK(s.at("passed").get<int>() == 2);
    CHECK(s.at("pass").get<bool>());

    // a failing entry flips the exit code to one
    campaign["results"].push_back(
        report_to_json(make_report("gamma", 1.0, 1e-12)));
    campaign["pass"] = false;
    {
        std::ofstream os("/tmp/ncg_campaign_bad.json");
        os << campaign.dump(2);
    }
    CHECK(run_cli("report /tmp/ncg_campaign_bad.json --format csv "
                  "--out /tmp/ncg_summary.txt") == 1);
    const std::string text = read_text("/tmp/ncg_summary.txt");
    CHECK(text.find("[FAIL] gamma") != std::string::npos);
    CHECK(text.find("2/3") != std::string::npos);

    // unknown schema is a usage/config error, not a verification failure
    nlohmann::json alien = campaign;
    alien["schema"] = "other/9";
    {
        std::ofstream os("/tmp/ncg_campaign_alien.json");
        os << alien.dump(2);
    }
    CHECK(run_cli("report /tmp/ncg_campaign_alien.json") == 2);
}
