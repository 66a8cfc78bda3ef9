#ifndef LAR_READOUT_HPP
#define LAR_READOUT_HPP

#include <string>
#include <vector>

#include "lar/linalg.hpp"
#include "lar/onshell.hpp"
#include "lar/simplex.hpp"
#include "lar/split_complex.hpp"

namespace lar {

// Orthogonal readout basis; columns are the context directions.
class ReadoutContext {
  public:
    explicit ReadoutContext(Mat basis, double ortho_tol = tol::orthogonality);
    static ReadoutContext identity(std::size_t n);
    // Planar rotation by `angle` in coordinates (i, j) of the identity context.
    static ReadoutContext rotation(std::size_t n, std::size_t i, std::size_t j, double angle);

    const Mat& basis() const { return basis_; }
    std::size_t dim() const { return basis_.rows(); }
    Vec column(std::size_t k) const;

  private:
    Mat basis_;
};

// pi_B(rho)_k = <b_k, rho>^2 for a unit state.
Lottery context_readout(const Vec& rho, const ReadoutContext& ctx,
                        double norm_tol = tol::unit_norm);

// Dresses rho~ with unit-hyperbola phases and compares the split Born form
// against the plain quadratic readout; returns the max componentwise gap.
double hyperbolic_born_check(const Vec& rho_tilde, const SplitVec& phases,
                             double hyper_tol = tol::hyperbola_unit);

struct InterferenceReport {
    Vec diagonal;             // per-outcome sum of a == b modal squares
    Vec cross;                // total - diagonal
    Vec total;                // squared modal sum, equals the flow amplitude squared
    double flow_mismatch = 0.0;     // max relative gap against onshell_flow
    double max_imag_residue = 0.0;  // modes must recombine to real values
    double eigen_residual = 0.0;
    double vector_condition = 0.0;
};
// Modal expansion of the on-shell amplitude at time t; refuses operators with
// ill-conditioned eigenvector matrices rather than approximating Jordan chains.
InterferenceReport interference_decomposition(const PreferenceOperator& op, const Vec& rho0,
                                              double t,
                                              double cond_threshold = tol::eig_condition);

struct SequentialReadout {
    Mat joint;                   // p(k then j)
    double order_defect = 0.0;   // max |p_12(k,j) - p_21(j,k)|
    double marginal_defect = 0.0;
    // The update rule is a modeling convention (rank-1 collapse), not a derived
    // law; reports carry this flag verbatim.
    std::string provenance = "extra-paper rule";
};
SequentialReadout sequential_readout(const Vec& rho, const ReadoutContext& first,
                                     const ReadoutContext& second);

// |<b_k, psi>|^2 / ||psi||^2 — the complex-sector context readout.
Lottery elliptic_context_readout(const CVec& psi, const ReadoutContext& ctx);

}  // namespace lar

#endif
