#ifndef LAR_TOLERANCES_HPP
#define LAR_TOLERANCES_HPP

// Default tolerances used across the engine. Every operation that checks one of
// these accepts an override parameter; these are just the documented defaults.

namespace lar::tol {

inline constexpr double sym_check        = 1e-10;  // relative asymmetry allowed by sym_eig
inline constexpr double skew_check       = 1e-10;  // relative symmetry allowed in declared-skew input
inline constexpr double pivot            = 1e-13;  // relative LU pivot floor
inline constexpr double lottery_sum      = 1e-12;  // |sum(q) - 1|
inline constexpr double tangent_sum      = 1e-12;  // |sum(v)|
inline constexpr double unit_norm        = 1e-12;  // | ||rho|| - 1 |
inline constexpr double interior_eps     = 1e-9;   // min prob for "interior" lotteries
inline constexpr double loop_closure     = 1e-12;  // first-vs-last loop sample
inline constexpr double orthogonality    = 1e-10;  // ||B^T B - I|| for readout contexts
inline constexpr double polarization_sym = 1e-12;  // ||M - M^T||
inline constexpr double hyperbola_unit   = 1e-12;  // |a^2 - b^2 - 1| for split phases
inline constexpr double peu_gap          = 1e-8;   // minimal spectral gap accepted
inline constexpr double peu_overlap      = 1e-10;  // minimal |<w*, rho0>| / ||rho0||
inline constexpr double eig_condition    = 1e6;    // eigenvector matrix condition threshold

}  // namespace lar::tol

#endif
