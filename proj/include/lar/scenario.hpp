#ifndef LAR_SCENARIO_HPP
#define LAR_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lar/linalg.hpp"
#include "lar/rng.hpp"

namespace lar {

// Scenario file contents ("lar-dyn/1" schema), after validation and defaulting.

struct GeneratorSpec {
    struct Explicit { Mat v; };
    struct Split { Mat sym; Mat skew; };
    struct Diagonal { Vec theta; };
    struct Random {
        std::uint64_t seed = 1;
        MatrixFamily family = MatrixFamily::General;
        double scale = 1.0;
    };
    std::variant<Explicit, Split, Diagonal, Random> value;

    Mat materialize(std::size_t n) const;
};

struct InitialSpec {
    struct FromLottery { Vec q0; };
    struct FromAmplitude { Vec rho0; };
    struct FromPhase { Vec rho0; Vec y0; };
    std::variant<FromLottery, FromAmplitude, FromPhase> value;

    Vec amplitude() const;           // rho~(0), lotteries lifted by sqrt
    std::optional<Vec> residual() const;  // y(0) when given
};

struct ContextSpec {
    // either an explicit orthogonal matrix or a planar rotation
    std::optional<Mat> matrix;
    std::size_t axis_i = 0, axis_j = 1;
    double angle = 0.0;
};

struct LoopSpec {
    std::optional<std::vector<Vec>> points;  // explicit closed loop
    Vec center;                              // else: Fisher-Rao circle
    double radius = 0.05;
    std::size_t samples = 192;
};

struct Scenario {
    std::string name;
    std::size_t n = 0;
    GeneratorSpec generator;
    InitialSpec initial;
    double t_start = 0.0;
    double t_end = 1.0;
    std::size_t samples = 101;
    std::vector<std::string> tasks;
    std::vector<ContextSpec> contexts;
    LoopSpec loop;
    Mat polarization_r;       // symmetric; defaults to I
    double interference_time; // defaults to t_end
    std::uint64_t seed = 1;

    std::vector<double> time_grid() const;
};

// Parses and validates; throws validation_error with the offending field path.
// `seed_override` substitutes the scenario seed (CLI --seed).
Scenario load_scenario(const std::string& path,
                       std::optional<std::uint64_t> seed_override = std::nullopt);
Scenario parse_scenario(const std::string& json_text, const std::string& fallback_name,
                        std::optional<std::uint64_t> seed_override = std::nullopt);

// Echo of the validated scenario with all defaults applied.
std::string scenario_to_json(const Scenario& s);

}  // namespace lar

#endif
