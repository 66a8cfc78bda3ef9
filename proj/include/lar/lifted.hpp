#ifndef LAR_LIFTED_HPP
#define LAR_LIFTED_HPP

#include <optional>
#include <vector>

#include "lar/linalg.hpp"
#include "lar/onshell.hpp"

namespace lar {

// Point of the doubled phase space: amplitude plus residual/momentum. Off-shell
// states are allowed; nothing ties y to rho_tilde.
struct PhaseState {
    Vec rho_tilde;
    Vec y;
};

struct LiftedTrajectory {
    std::vector<double> times;
    std::vector<PhaseState> states;

    Vec lambda_series() const;       // 2 <rho~, y>
    Vec residual_sq_series() const;  // ||y||^2
    Vec normaliser_series() const;   // ||rho~||^2
    Vec sigma_series() const;        // log ||rho~||  (-inf at isolated zeros)
};

// Block generator [[V, I], [0, -V^T]]; satisfies A^T J + J A = 0.
Mat lifted_generator(const PreferenceOperator& op);

// Canonical symplectic form J = [[0, I], [-I, 0]].
Mat symplectic_form(std::size_t n);

LiftedTrajectory lifted_flow(const PreferenceOperator& op, const PhaseState& z0,
                             const std::vector<double>& times);

// || Phi_t^T J Phi_t - J ||_F for Phi_t = exp(t A).
double symplectic_defect(const PreferenceOperator& op, double t);

struct WittShearSplit {
    Mat para_unitary;  // diag blocks (V, -V^T); commutes with diag(I, -I)
    Mat shear;         // [[0, I], [0, 0]]; nilpotent
};
WittShearSplit witt_shear_split(const PreferenceOperator& op);

struct NeutralIndex {
    Vec lambda;             // 2 <rho~, y> along the grid
    double balance_defect;  // max_k |Lambda(t_k) - Lambda(t_0) - 2 int ||y||^2|
};
// Needs at least 3 grid points for the quadrature.
NeutralIndex neutral_index(const LiftedTrajectory& traj);

struct ActionAccumulation {
    double value = 0.0;           // int_{t0}^{t} ||y||^2
    double error_estimate = 0.0;  // Richardson estimate from half-resolution grid
};
// t0/t must match grid times (within matching tolerance).
ActionAccumulation action_accumulation(const LiftedTrajectory& traj, double t0, double t);

// First time Lambda reaches 0 on (0, horizon], by bracketing + bisection.
// Lambda(0) > 0: none (already crossed). Lambda(0) == 0 with nonzero residual:
// crossing at t = 0. Returns none when Lambda(horizon) < 0.
std::optional<double> cone_crossing_time(const PreferenceOperator& op, const PhaseState& z0,
                                         double horizon, double time_tol = 1e-12);

// <rho, S rho> + Lambda / (2 Z): off-shell rate of log ||rho~||.
double offshell_sigma_rate(const PhaseState& z, const PreferenceOperator& op);

}  // namespace lar

#endif
