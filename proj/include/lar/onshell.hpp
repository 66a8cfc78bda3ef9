#ifndef LAR_ONSHELL_HPP
#define LAR_ONSHELL_HPP

#include <cstddef>
#include <vector>

#include "lar/linalg.hpp"
#include "lar/simplex.hpp"

namespace lar {

// Latent evaluator with its cached symmetric/skew split and the spectrum of the
// symmetric part. Immutable after construction.
class PreferenceOperator {
  public:
    explicit PreferenceOperator(Mat generator);
    static PreferenceOperator from_split(const Mat& sym, const Mat& skew,
                                         double check_tol = tol::sym_check);

    const Mat& generator() const { return full_; }
    const Mat& sym_part() const { return sym_; }
    const Mat& skew_part() const { return skew_; }
    const SymEigenDecomposition& sym_spectrum() const { return sym_spectrum_; }
    double min_sym_eigenvalue() const { return min_sym_eig_; }
    std::size_t dim() const { return full_.rows(); }

  private:
    Mat full_, sym_, skew_;
    SymEigenDecomposition sym_spectrum_;
    double min_sym_eig_ = 0.0;
};

struct AmplitudeTrajectory {
    std::vector<double> times;
    std::vector<Vec> states;  // unnormalised amplitudes, nonzero throughout

    double radius(std::size_t k) const { return norm2(states[k]); }
    double normaliser(std::size_t k) const;  // squared radius
    Lottery lottery(std::size_t k) const { return readout(states[k]); }

    // (sample index, component) pairs where a component changes sign or hits zero
    // between consecutive samples; the readout touches the boundary there.
    std::vector<std::pair<std::size_t, std::size_t>> support_events() const;
};

// Tangential projection of the preferred ambient direction at a unit state.
Vec lar_field(const Vec& rho, const PreferenceOperator& op, double norm_tol = tol::unit_norm);

// Exact sampling of d/dt rho~ = V rho~ at the grid times.
AmplitudeTrajectory onshell_flow(const PreferenceOperator& op, const Vec& rho0,
                                 const std::vector<double>& times);

struct PolarRates {
    double radial_rate = 0.0;  // <rho, S rho> * r
    Vec dir_rate;              // tangential component, orthogonal to rho
};
PolarRates polar_rates(const Vec& rho_tilde, const PreferenceOperator& op);

struct ClockSeries {
    Vec sigma_plus;  // log||rho~(t)|| - lambda_min * t
    Vec production;  // <rho, (S - lambda_min I) rho> at each sample
};
ClockSeries entropic_clock(const AmplitudeTrajectory& traj, const PreferenceOperator& op);

struct FreeEnergyCheck {
    double log_z = 0.0;
    double dual = 0.0;    // sum q_i phi_i + H(q), with 0 log 0 = 0
    double defect = 0.0;  // |log_z - dual|
};
FreeEnergyCheck free_energy_check(const Vec& rho_tilde);

// Closed-form softmax tilt q_k(0) e^{2 T theta_k} / Z; inverse temperature 2T.
Lottery logit_posterior(const Lottery& q0, const Vec& theta, double horizon);

struct PeuLimit {
    Lottery q_star;
    double gap = 0.0;  // top spectral gap of the symmetric operator
};
// Projective long-horizon limit for a symmetric evaluator: squared-normalized
// dominant eigenvector. Errors: degenerate top eigenvalue; orthogonal start.
PeuLimit peu_limit(const Mat& sym_op, const Vec& rho0, double gap_tol = tol::peu_gap,
                   double overlap_tol = tol::peu_overlap);

}  // namespace lar

#endif
