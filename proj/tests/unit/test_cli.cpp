#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qtm_cli/cli.hpp"

using namespace qtm::cli;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "qtm");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) { return std::string(QTM_TEST_TMPDIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

} // namespace

TEST_CASE("ness prints JSON with currents and regime", "[cli]") {
    const Result r = run({"ness", "--B1", "6", "--lambda1", "0.4"});
    REQUIRE(r.code == kOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["regime"] == "IV");
    CHECK(j["currents"]["units"] == "T1*gamma1");
    CHECK(j["currents"]["Qdot"].size() == 3);
    CHECK(std::abs(j["currents"]["first_law_residual"].get<double>()) < 1e-10);
    CHECK(j["params"]["B3"].get<double>() == Catch::Approx(6.0));

    const auto natural = nlohmann::json::parse(run({"ness", "--B1", "6", "--natural-units"}).out);
    CHECK(natural["currents"]["units"] == "natural");
}

TEST_CASE("classify prints a single label", "[cli]") {
    // thermal transition at B1 = 12·(1/6 - 1/10)/(1 - 1/10) ≈ 0.889
    const Result r = run({"classify", "--B1", "3"});
    CHECK(r.code == kOk);
    CHECK(r.out == "II\n");
    CHECK(run({"classify", "--B1", "0.5"}).out == "I\n");
}

TEST_CASE("config files and flag precedence", "[cli]") {
    const std::string cfg = temp_path("cli_test.cfg");
    {
        std::ofstream f(cfg);
        f << "# thermal machine\nB1 = 9\nlambda1 = 0.2\n";
    }
    const auto from_file = nlohmann::json::parse(run({"ness", "--config", cfg}).out);
    CHECK(from_file["params"]["B1"].get<double>() == 9.0);
    CHECK(from_file["params"]["lambda"][0].get<double>() == 0.2);
    const auto overridden = nlohmann::json::parse(run({"ness", "--config", cfg, "--B1", "4"}).out);
    CHECK(overridden["params"]["B1"].get<double>() == 4.0);

    {
        std::ofstream f(cfg);
        f << "B1 = 9\nbogus = 1\n";
    }
    const Result bad = run({"ness", "--config", cfg});
    CHECK(bad.code == kConfigError);
    CHECK(bad.err.find(":2") != std::string::npos);
}

TEST_CASE("errors map to exit codes", "[cli]") {
    CHECK(run({}).code == kConfigError);
    CHECK(run({"ness", "--B1", "20"}).code == kConfigError);
    CHECK(run({"ness", "--B1", "abc"}).code == kConfigError);
    CHECK(run({"ness", "--T1", "20"}).code == kConfigError);
    CHECK(run({"diagram", "--preset", "fig9"}).code == kConfigError);
    CHECK(run({"collide", "--steps", "0"}).code == kConfigError);
    CHECK(run({"--help"}).code == kOk);
}

TEST_CASE("validate subcommand", "[cli]") {
    const Result r = run({"validate", "--B1", "6", "--lambda1", "0.4"});
    CHECK(r.code == kOk);
    CHECK(count_lines(r.out) == 11);
    CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("diagram output is deterministic across thread counts", "[cli]") {
    const std::string overlay = temp_path("overlay.csv");
    const Result one = run({"diagram", "--preset", "fig2a", "--b_count", "12", "--lambda_count",
                            "6", "--threads", "1", "--overlay", overlay});
    REQUIRE(one.code == kOk);
    const Result many = run({"diagram", "--preset", "fig2a", "--b_count", "12", "--lambda_count",
                             "6", "--threads", "4"});
    CHECK(one.out == many.out);
    CHECK(count_lines(one.out) == 1 + 12 * 6);
    CHECK(count_lines(slurp(overlay)) == 1 + 12);
    CHECK(one.err.find("0 away from analytic curves") != std::string::npos);
}

TEST_CASE("curve subcommand with bracketing and objective", "[cli]") {
    const std::string path = temp_path("curve.csv");
    const Result r = run({"curve", "--preset", "fig6", "--lambda", "0.9", "--count", "30",
                          "--bracket", "--objective", "abs_W3", "-o", path});
    REQUIRE(r.code == kOk);
    CHECK(r.out.empty());
    const std::string text = slurp(path);
    CHECK(count_lines(text) == 31);
    CHECK(text.find(",VI,1,") != std::string::npos);
    CHECK(r.err.find("window [") != std::string::npos);
    CHECK(r.err.find("max abs_W3") != std::string::npos);
}

TEST_CASE("collide and transitions subcommands", "[cli]") {
    const Result c = run({"collide", "--steps", "4", "--lambda1", "0.3", "--initial", "ground"});
    REQUIRE(c.code == kOk);
    CHECK(count_lines(c.out) == 5);
    CHECK(run({"collide", "--initial", "excited"}).code == kConfigError);

    const Result t = run({"transitions", "--B1", "6"});
    REQUIRE(t.code == kOk);
    CHECK(t.out.rfind("reservoir,lambda_star,lambda_ne\n", 0) == 0);
    CHECK(count_lines(t.out) == 4);
    const Result ta = run({"transitions", "--reservoir", "1", "--axis", "B1", "--min", "1",
                           "--max", "11", "--count", "5"});
    REQUIRE(ta.code == kOk);
    CHECK(count_lines(ta.out) == 6);
}
