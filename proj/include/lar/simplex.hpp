#ifndef LAR_SIMPLEX_HPP
#define LAR_SIMPLEX_HPP

#include <cstddef>
#include <vector>

#include "lar/linalg.hpp"

namespace lar {

// Probability vector on the closed simplex; most geometric operations require
// the interior (all coordinates above interior_eps).
class Lottery {
  public:
    explicit Lottery(Vec probs, double sum_tol = tol::lottery_sum);
    static Lottery uniform(std::size_t n);

    const Vec& probs() const { return probs_; }
    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    bool interior(double eps = tol::interior_eps) const;
    void require_interior(double eps = tol::interior_eps) const;

  private:
    Vec probs_;
};

class TangentVec {
  public:
    explicit TangentVec(Vec comps, double sum_tol = tol::tangent_sum);
    const Vec& comps() const { return comps_; }
    std::size_t size() const { return comps_.size(); }
    double operator[](std::size_t i) const { return comps_[i]; }

  private:
    Vec comps_;
};

class Amplitude {
  public:
    explicit Amplitude(Vec rho, double norm_tol = tol::unit_norm);
    const Vec& rho() const { return rho_; }
    std::size_t size() const { return rho_.size(); }
    double operator[](std::size_t i) const { return rho_[i]; }

  private:
    Vec rho_;
};

// Square-root lift of an interior lottery; positive branch.
Amplitude lift(const Lottery& q);

// Sign-blind, scale-invariant quadratic readout of a nonzero amplitude.
Lottery readout(const Vec& rho_tilde);

double fisher_rao_inner(const Lottery& q, const TangentVec& v, const TangentVec& w);

// c * arccos(sum sqrt(q_i q'_i)), inner product clamped into [-1, 1].
double perceptual_distance(const Lottery& q, const Lottery& qp, double c = 1.0);

// U(q) = (1/2) sqrt(q)^T S sqrt(q) for symmetric S.
double utility_potential(const Lottery& q, const Mat& sym_op,
                         double sym_tol = tol::sym_check);

// Marginal preference covector: beta_q(v) = sum_i (V sqrt(q))_i v_i / (2 sqrt(q_i)).
double beta_eval(const Lottery& q, const TangentVec& v, const Mat& evaluator);

// Skew bilinear comparison rho^T F rho'.
double ssb_regret(const Vec& rho, const Vec& rho_prime, const Mat& skew_op,
                  double skew_tol = tol::skew_check);

struct Holonomy {
    double value = 0.0;
    double error_estimate = 0.0;  // one composite-refinement step
};

// Loop integral of beta along the closed periodic-cubic interpolant of the
// samples (first == last within closure tolerance; all samples interior).
// For n = 2 the value is still computed, but the exact/co-exact reading of the
// channels needs at least 3 active outcomes, so no such claim attaches to it.
Holonomy loop_holonomy(const std::vector<Vec>& loop_samples, const Mat& evaluator,
                       std::size_t nodes_per_segment = 64);

// Pushforward of the projected ambient drift: dq_i = 2 sqrt(q_i) (Q_rho V rho)_i.
// Satisfies g_F(drift, w) = 4 beta_q(w); diagonal V gives replicator form.
TangentVec simplex_drift(const Lottery& q, const Mat& evaluator);

// Closed sample loop tracing the Fisher-Rao circle of the given radius around
// `center` (deterministic tangent frame from Gram-Schmidt of coordinate axes).
std::vector<Vec> fisher_circle(const Lottery& center, double radius, std::size_t samples);

// Trace gauge normalization V - (tr V / n) I. Offered as a utility, never applied
// implicitly.
Mat traceless_gauge(const Mat& v);

}  // namespace lar

#endif
