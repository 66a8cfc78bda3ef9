#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lar/errors.hpp"
#include "lar/onshell.hpp"
#include "lar/runner.hpp"
#include "lar/scenario.hpp"

using namespace lar;
namespace fs = std::filesystem;

namespace {

const char* kMinimalScenario = R"({
  "n": 2,
  "generator": {"diagonal": [1.0, 0.0]},
  "initial": {"lottery": [0.5, 0.5]},
  "time": {"start": 0.0, "end": 1.0, "samples": 101},
  "tasks": ["onshell"]
})";

fs::path temp_dir(const std::string& leaf) {
    const fs::path dir = fs::temp_directory_path() / "lar_dyn_tests" / leaf;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<Vec> read_csv(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);  // header
    std::vector<Vec> rows;
    while (std::getline(in, line)) {
        Vec row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

TEST_CASE("parse_scenario applies defaults") {
    const Scenario s = parse_scenario(kMinimalScenario, "minimal");
    CHECK(s.name == "minimal");
    CHECK(s.n == 2);
    CHECK(s.samples == 101);
    CHECK(s.tasks == std::vector<std::string>{"onshell"});
    CHECK(s.seed == 1);
    CHECK(s.interference_time == 1.0);
    CHECK(s.contexts.size() == 2);  // default pair: identity + pi/4 rotation
    CHECK(frob_norm(s.polarization_r - Mat::identity(2)) == 0.0);

    const std::string echo = scenario_to_json(s);
    CHECK(echo.find("\"schema\": \"lar-dyn/1\"") != std::string::npos);
    CHECK(echo.find("\"samples\": 101") != std::string::npos);

    // echo parses back to the same scenario
    const Scenario round = parse_scenario(echo, "ignored");
    CHECK(round.name == "minimal");
    CHECK(round.samples == s.samples);
}

TEST_CASE("parse_scenario rejects bad input with field paths") {
    auto expect_field = [](const char* text, const std::string& field) {
        try {
            (void)parse_scenario(text, "bad");
            FAIL("expected validation_error");
        } catch (const validation_error& e) {
            CHECK(e.field_path == field);
        }
    };

    expect_field(R"({"n": 2, "generator": {"diagonal": [1, 0]},
                     "initial": {"lottery": [0.5, 0.6]},
                     "time": {"start": 0, "end": 1, "samples": 11},
                     "tasks": ["onshell"]})",
                 "initial.lottery");

    expect_field(R"({"n": 2,
                     "generator": {"split": {"S": [[0, 1], [1, 0]], "F": [[0, 1], [1, 0]]}},
                     "initial": {"lottery": [0.5, 0.5]},
                     "time": {"start": 0, "end": 1, "samples": 11},
                     "tasks": ["onshell"]})",
                 "generator.split.F");

    expect_field(R"({"n": 2, "generator": {"diagonal": [1, 0]},
                     "initial": {"lottery": [0.5, 0.5]},
                     "time": {"start": 0, "end": 1, "samples": 11},
                     "tasks": ["wat"]})",
                 "tasks");

    CHECK_THROWS_WITH_AS((void)parse_scenario("{ not json", "bad"),
                         doctest::Contains("scenario parse error"), std::runtime_error);
}

TEST_CASE("deterministic generator materialization") {
    const char* text = R"({
      "n": 3,
      "generator": {"random": {"seed": 9, "kind": "symmetric", "scale": 1.5}},
      "initial": {"amplitude": [1.0, 0.0, 0.0]},
      "time": {"start": 0.0, "end": 1.0, "samples": 11},
      "tasks": ["onshell"]
    })";
    const Scenario s = parse_scenario(text, "rand");
    const Mat a = s.generator.materialize(3);
    const Mat b = s.generator.materialize(3);
    CHECK(frob_norm(a - b) == 0.0);
    CHECK(frob_norm(a - transpose(a)) == 0.0);

    // --seed override rewires the draw
    const Scenario o = parse_scenario(text, "rand", 10);
    CHECK(frob_norm(o.generator.materialize(3) - a) != 0.0);
}

TEST_CASE("run writes the RI closed form") {
    const Scenario s = parse_scenario(kMinimalScenario, "ri");
    const fs::path dir = temp_dir("ri");
    const RunReport report = run(s, dir.string());
    CHECK(report.tasks.size() == 1);

    const auto rows = read_csv(dir / "onshell_lottery.csv");
    REQUIRE(rows.size() == 101);
    const Lottery prior(Vec{0.5, 0.5});
    for (const Vec& row : rows) {
        const Lottery expect = logit_posterior(prior, Vec{1.0, 0.0}, row[0]);
        CHECK(std::abs(row[1] - expect[0]) <= 1e-12);
        CHECK(std::abs(row[2] - expect[1]) <= 1e-12);
    }
    CHECK(slurp(dir / "report.json").find("\"onshell\"") != std::string::npos);
}

TEST_CASE("run covers lifted diagnostics") {
    const char* text = R"({
      "n": 3,
      "generator": {"random": {"seed": 5, "kind": "general"}},
      "initial": {"phase": {"rho": [1.0, 0.2, -0.3], "y": [0.1, -0.4, 0.2]}},
      "time": {"start": 0.0, "end": 2.0, "samples": 401},
      "tasks": ["lifted"]
    })";
    const Scenario s = parse_scenario(text, "lifted");
    const fs::path dir = temp_dir("lifted");
    const RunReport report = run(s, dir.string());

    double balance = -1;
    for (const auto& [key, value] : report.tasks[0].metrics)
        if (key == "balance_defect") balance = value;
    CHECK(balance >= 0);
    CHECK(balance <= 1e-7);

    const auto rows = read_csv(dir / "lifted_lambda.csv");
    REQUIRE(rows.size() == 401);
    for (std::size_t k = 1; k < rows.size(); ++k)
        CHECK(rows[k][1] >= rows[k - 1][1] - 1e-10);  // Lambda monotone
}

TEST_CASE("invariants task passes on a seeded scenario") {
    const char* text = R"({
      "n": 3,
      "generator": {"random": {"seed": 42, "kind": "general"}},
      "initial": {"lottery": [0.3, 0.4, 0.3]},
      "time": {"start": 0.0, "end": 2.0, "samples": 101},
      "tasks": ["invariants"]
    })";
    const Scenario s = parse_scenario(text, "inv42");
    const fs::path dir = temp_dir("inv42");
    const RunReport report = run(s, dir.string());
    REQUIRE_FALSE(report.invariants.empty());
    for (const InvariantRow& row : report.invariants) {
        INFO(row.name, " defect=", row.defect, " tol=", row.tolerance);
        CHECK(row.pass);
    }
    CHECK(report.invariants_pass);
}

TEST_CASE("conditional invariant rows appear for special generators") {
    auto has_passing_row = [](const std::vector<InvariantRow>& rows, const std::string& name) {
        for (const InvariantRow& row : rows)
            if (row.name == name) return row.pass;
        return false;
    };

    const char* symmetric_text = R"({
      "n": 3,
      "generator": {"random": {"seed": 7, "kind": "symmetric"}},
      "initial": {"lottery": [0.3, 0.4, 0.3]},
      "time": {"start": 0.0, "end": 1.0, "samples": 51},
      "tasks": ["invariants"]
    })";
    const auto sym_rows = invariant_suite(parse_scenario(symmetric_text, "sym"));
    CHECK(has_passing_row(sym_rows, "simplex.holonomy_exact"));

    const char* skew_text = R"({
      "n": 3,
      "generator": {"random": {"seed": 7, "kind": "skew"}},
      "initial": {"lottery": [0.3, 0.4, 0.3]},
      "time": {"start": 0.0, "end": 1.0, "samples": 51},
      "tasks": ["invariants"]
    })";
    const auto skew_rows = invariant_suite(parse_scenario(skew_text, "skew"));
    CHECK(has_passing_row(skew_rows, "onshell.norm_conservation"));
    for (const InvariantRow& row : skew_rows) {
        INFO(row.name);
        CHECK(row.pass);
    }
}

TEST_CASE("tolerance scaling loosens the invariant table") {
    const char* text = R"({
      "n": 2,
      "generator": {"diagonal": [0.5, -0.5]},
      "initial": {"lottery": [0.5, 0.5]},
      "time": {"start": 0.0, "end": 1.0, "samples": 21},
      "tasks": ["invariants"]
    })";
    const Scenario s = parse_scenario(text, "scaled");
    const auto strict = invariant_suite(s, 1.0);
    const auto loose = invariant_suite(s, 100.0);
    REQUIRE(strict.size() == loose.size());
    for (std::size_t i = 0; i < strict.size(); ++i)
        CHECK(loose[i].tolerance == doctest::Approx(100.0 * strict[i].tolerance));
}

TEST_CASE("re-running a scenario reproduces identical CSV bytes") {
    const char* text = R"({
      "n": 3,
      "generator": {"random": {"seed": 42, "kind": "general"}},
      "initial": {"lottery": [0.3, 0.4, 0.3]},
      "time": {"start": 0.0, "end": 2.0, "samples": 101},
      "tasks": ["onshell", "lifted", "clar", "holonomy", "interference", "contexts"]
    })";
    const Scenario s = parse_scenario(text, "det");
    const fs::path dir_a = temp_dir("det_a");
    const fs::path dir_b = temp_dir("det_b");
    (void)run(s, dir_a.string());
    (void)run(s, dir_b.string());

    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(dir_a)) {
        if (entry.path().extension() != ".csv") continue;
        ++compared;
        CHECK(slurp(entry.path()) == slurp(dir_b / entry.path().filename()));
    }
    CHECK(compared >= 8);
}
