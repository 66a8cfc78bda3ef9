#ifndef LAR_RUNNER_HPP
#define LAR_RUNNER_HPP

#include <string>
#include <utility>
#include <vector>

#include "lar/scenario.hpp"

namespace lar {

struct InvariantRow {
    std::string name;
    double defect = 0.0;
    double tolerance = 0.0;
    bool pass = true;
};

struct TaskReport {
    std::string task;
    std::vector<std::string> files;                      // CSV files written
    std::vector<std::pair<std::string, double>> metrics; // scalar outputs
    double wall_ms = 0.0;
};

struct RunReport {
    std::string scenario_name;
    std::vector<TaskReport> tasks;
    std::vector<InvariantRow> invariants;
    bool invariants_pass = true;
    double wall_ms = 0.0;
};

// Executes every task of the scenario, writing one CSV per channel group plus
// report.json into out_dir. Deterministic given the scenario (timings in
// report.json aside). tol_scale multiplies every invariant tolerance.
RunReport run(const Scenario& scenario, const std::string& out_dir, double tol_scale = 1.0);

// The invariant table alone (no file output).
std::vector<InvariantRow> invariant_suite(const Scenario& scenario, double tol_scale = 1.0);

}  // namespace lar

#endif
