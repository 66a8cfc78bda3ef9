#ifndef LAR_CLAR_HPP
#define LAR_CLAR_HPP

#include <optional>
#include <vector>

#include "lar/lifted.hpp"
#include "lar/linalg.hpp"
#include "lar/onshell.hpp"

namespace lar {

// Complex symmetric matrix with nondegenerate imaginary part; defines the
// complex Lagrangian graph splitting. `real_form` is set when M = R - iI.
class Polarization {
  public:
    static Polarization from_matrix(CMat m, double sym_tol = tol::polarization_sym);
    static Polarization from_real_form(const Mat& r, double sym_tol = tol::polarization_sym);

    const CMat& matrix() const { return m_; }
    const Mat& imag_part() const { return im_; }
    const std::optional<Mat>& real_form() const { return real_form_; }
    std::size_t dim() const { return m_.rows(); }

  private:
    Polarization() = default;
    CMat m_;
    Mat im_;
    std::optional<Mat> real_form_;
};

// z = rho~ + i y and back.
CVec complexify(const PhaseState& z);
PhaseState decomplexify(const CVec& z);

// Right-hand side (F - i/2) z + (S + i/2) conj(z); mixes z and conj(z) off the
// real leaf.
CVec bogoliubov_rhs(const CVec& z, const PreferenceOperator& op);

// d/dt ||z||^2 = 2 Re( z^dag (S + i/2) conj(z) ).
double hermitian_norm_rate(const CVec& z, const PreferenceOperator& op);

struct GraphPoint {
    CVec u;
    CVec graph_value;  // M u
};
// Unique decomposition of (a, b) across the graph splitting: u = (2i Im M)^{-1} (b - conj(M) a).
GraphPoint polarization_projector(const Polarization& pol, const CVec& a, const CVec& b);

struct PsiPhi {
    CVec psi;  // (I - iR) a + i b
    CVec phi;  // (I + iR) a - i b
};
PsiPhi psi_phi_coords(const CVec& a, const CVec& b, const Mat& r);
PsiPhi psi_phi_coords(const PhaseState& z, const Mat& r);
// Inverse map; returns the (a, b) pair.
std::pair<CVec, CVec> psi_phi_inverse(const CVec& psi, const CVec& phi, const Mat& r);

struct ClarTrajectory {
    std::vector<double> times;
    std::vector<CVec> psi;        // exp(-i t (I + S + iF)) psi0
    std::vector<CVec> rephased;   // e^{it} psi(t); Hermitian generator S + iF
};
ClarTrajectory clar_flow(const PreferenceOperator& op, const CVec& psi0,
                         const std::vector<double>& times);

// Packaged Hermitian generator S + iF of the rephased flow.
CMat hermitian_generator(const PreferenceOperator& op);
// Non-Hermitian packaging iV of the on-shell complex form.
CMat nonhermitian_generator(const PreferenceOperator& op);

// Projected Hamilton generator Pi_M . X_H as a complex 2n x 2n matrix acting on
// stacked (a, b).
CMat projected_generator(const PreferenceOperator& op, const Polarization& pol);

// max_t || phi(t) - phi(0) || along the projected flow started at (a0, b0),
// for the normalized polarization M = R - iI. Near-zero by construction; the
// returned number measures the full coordinate round trip.
double clar_leaf_defect(const PreferenceOperator& op, const CVec& a0, const CVec& b0,
                        const std::vector<double>& times, const Mat& r);

// Same drift measured along the UNprojected Hamilton flow; generically large,
// which is what makes the projection a real restriction.
double unprojected_leaf_defect(const PreferenceOperator& op, const CVec& a0, const CVec& b0,
                               const std::vector<double>& times, const Mat& r);

}  // namespace lar

#endif
