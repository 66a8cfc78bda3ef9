// lar-dyn: scenario-driven front end for the decision-dynamics engine.
// Exit codes: 0 ok, 2 parse error, 3 validation error, 4 invariant failure,
// 5 numerical failure.

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lar/errors.hpp"
#include "lar/runner.hpp"
#include "lar/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitInvariant = 4;
constexpr int kExitNumerical = 5;

struct Options {
    std::vector<std::string> scenario_files;
    std::string out_dir = "out";
    double tol_scale = 1.0;
    std::optional<std::uint64_t> seed;
};

int classify(const std::exception& e) {
    if (dynamic_cast<const lar::validation_error*>(&e)) return kExitValidation;
    const std::string what = e.what();
    if (what.rfind("scenario parse error", 0) == 0) return kExitParse;
    return kExitNumerical;
}

std::size_t batch_threads(std::size_t jobs) {
    std::size_t cap = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LAR_DYN_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed > 0) cap = static_cast<std::size_t>(parsed);
    }
    return std::min(cap, jobs);
}

int run_command(const Options& opt) {
    struct Job {
        lar::Scenario scenario;
        std::string dir;
        int exit_code = kExitOk;
        std::string error;
        lar::RunReport report;
    };
    std::vector<Job> jobs;
    for (const std::string& file : opt.scenario_files) {
        Job job;
        job.scenario = lar::load_scenario(file, opt.seed);
        job.dir = (std::filesystem::path(opt.out_dir) / job.scenario.name).string();
        jobs.push_back(std::move(job));
    }

    auto worker = [&](Job& job) {
        try {
            job.report = lar::run(job.scenario, job.dir, opt.tol_scale);
            if (!job.report.invariants.empty() && !job.report.invariants_pass)
                job.exit_code = kExitInvariant;
        } catch (const std::exception& e) {
            job.exit_code = classify(e);
            job.error = e.what();
        }
    };

    const std::size_t threads = batch_threads(jobs.size());
    if (threads <= 1 || jobs.size() <= 1) {
        for (Job& job : jobs) worker(job);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t k = t; k < jobs.size(); k += threads) worker(jobs[k]);
            });
        for (std::thread& th : pool) th.join();
    }

    int exit_code = kExitOk;
    for (const Job& job : jobs) {
        if (job.exit_code != kExitOk) {
            std::cerr << "error: " << job.scenario.name << ": " << job.error << "\n";
            exit_code = std::max(exit_code, job.exit_code);
            continue;
        }
        std::cout << job.scenario.name << ": " << job.report.tasks.size() << " task(s) -> "
                  << job.dir;
        if (!job.report.invariants.empty())
            std::cout << " [invariants " << (job.report.invariants_pass ? "pass" : "FAIL") << "]";
        std::cout << "\n";
        if (!job.report.invariants.empty() && !job.report.invariants_pass)
            exit_code = std::max(exit_code, kExitInvariant);
    }
    return exit_code;
}

int check_command(const Options& opt) {
    for (const std::string& file : opt.scenario_files) {
        const lar::Scenario s = lar::load_scenario(file, opt.seed);
        std::cout << lar::scenario_to_json(s) << "\n";
    }
    return kExitOk;
}

int invariants_command(const Options& opt) {
    int exit_code = kExitOk;
    for (const std::string& file : opt.scenario_files) {
        const lar::Scenario s = lar::load_scenario(file, opt.seed);
        const auto rows = lar::invariant_suite(s, opt.tol_scale);
        bool all_pass = true;
        std::cout << s.name << ":\n";
        for (const auto& row : rows) {
            std::cout << "  " << (row.pass ? "pass" : "FAIL") << "  " << row.name
                      << "  defect=" << row.defect << "  tol=" << row.tolerance << "\n";
            all_pass = all_pass && row.pass;
        }
        if (!all_pass) exit_code = kExitInvariant;
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lar-dyn: amplitude decision-dynamics engine"};
    app.require_subcommand(1);

    Options opt;
    std::uint64_t seed_value = 0;
    bool seed_given = false;

    auto add_common = [&](CLI::App* cmd, bool with_out) {
        cmd->add_option("scenarios", opt.scenario_files, "scenario JSON file(s)")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--tol-scale", opt.tol_scale, "global tolerance multiplier")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed_value, "override the scenario seed")
            ->each([&](const std::string&) { seed_given = true; });
        if (with_out) cmd->add_option("--out", opt.out_dir, "output directory");
    };

    CLI::App* run_cmd = app.add_subcommand("run", "run scenario tasks and write CSV/report");
    add_common(run_cmd, true);
    CLI::App* check_cmd = app.add_subcommand("check", "validate a scenario and echo defaults");
    add_common(check_cmd, false);
    CLI::App* inv_cmd = app.add_subcommand("invariants", "run the invariant table only");
    add_common(inv_cmd, false);

    CLI11_PARSE(app, argc, argv);
    if (seed_given) opt.seed = seed_value;

    try {
        if (run_cmd->parsed()) return run_command(opt);
        if (check_cmd->parsed()) return check_command(opt);
        return invariants_command(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify(e);
    }
}
