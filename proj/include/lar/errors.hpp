#ifndef LAR_ERRORS_HPP
#define LAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lar {

// Scenario/config problems (CLI maps these to exit code 3).
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_path(field) {}
    std::string field_path;
};

// Numerical failures (CLI maps these to exit code 5).
struct singular_matrix_error : std::runtime_error {
    explicit singular_matrix_error(const std::string& what) : std::runtime_error(what) {}
};

struct convergence_error : std::runtime_error {
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

// peu_limit failure modes, kept distinct on purpose.
struct degenerate_spectrum_error : std::domain_error {
    explicit degenerate_spectrum_error(const std::string& what) : std::domain_error(what) {}
};

struct orthogonal_start_error : std::domain_error {
    explicit orthogonal_start_error(const std::string& what) : std::domain_error(what) {}
};

}  // namespace lar

#endif
