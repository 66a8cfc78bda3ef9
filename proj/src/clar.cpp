#include "lar/clar.hpp"

#include <cmath>
#include <stdexcept>

namespace lar {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

void check_square_match(const Mat& r, std::size_t n, const char* where) {
    if (!r.square() || r.rows() != n)
        throw std::invalid_argument(std::string(where) + ": dimension mismatch");
    if (frob_norm(r - transpose(r)) > tol::sym_check * std::max(1.0, frob_norm(r)))
        throw std::domain_error(std::string(where) + ": R must be symmetric");
}

CVec stack2(const CVec& a, const CVec& b) {
    CVec out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

std::pair<CVec, CVec> unstack2(const CVec& z) {
    const std::size_t n = z.size() / 2;
    return {CVec(z.begin(), z.begin() + n), CVec(z.begin() + n, z.end())};
}

}  // namespace

Polarization Polarization::from_matrix(CMat m, double sym_tol) {
    if (!m.square()) throw std::invalid_argument("Polarization: matrix must be square");
    const double scale = std::max(1.0, frob_norm(m));
    if (frob_norm(m - transpose(m)) > sym_tol * scale)
        throw std::domain_error("Polarization: matrix is not complex symmetric");

    Polarization pol;
    pol.im_ = Mat(m.rows(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) pol.im_(i, j) = m(i, j).imag();
    // nondegeneracy of Im M: LU must succeed at the pivot floor
    try {
        lu_factor(pol.im_);
    } catch (const singular_matrix_error&) {
        throw std::domain_error("Polarization: Im M is singular");
    }

    // Detect the normalized class M = R - iI.
    bool normalized = true;
    for (std::size_t i = 0; i < m.rows() && normalized; ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const double target = (i == j) ? -1.0 : 0.0;
            if (std::abs(pol.im_(i, j) - target) > sym_tol) {
                normalized = false;
                break;
            }
        }
    if (normalized) {
        Mat r(m.rows(), m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).real();
        pol.real_form_ = std::move(r);
    }
    pol.m_ = std::move(m);
    return pol;
}

Polarization Polarization::from_real_form(const Mat& r, double sym_tol) {
    if (!r.square()) throw std::invalid_argument("Polarization: R must be square");
    CMat m(r.rows(), r.rows());
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j)
            m(i, j) = std::complex<double>(r(i, j), (i == j) ? -1.0 : 0.0);
    return from_matrix(std::move(m), sym_tol);
}

CVec complexify(const PhaseState& z) {
    if (z.rho_tilde.size() != z.y.size())
        throw std::invalid_argument("complexify: mismatched components");
    CVec out(z.rho_tilde.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::complex<double>(z.rho_tilde[i], z.y[i]);
    return out;
}

PhaseState decomplexify(const CVec& z) {
    PhaseState out;
    out.rho_tilde.resize(z.size());
    out.y.resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        out.rho_tilde[i] = z[i].real();
        out.y[i] = z[i].imag();
    }
    return out;
}

CVec bogoliubov_rhs(const CVec& z, const PreferenceOperator& op) {
    if (z.size() != op.dim()) throw std::invalid_argument("bogoliubov_rhs: dimension mismatch");
    const CMat s = to_complex(op.sym_part());
    const CMat f = to_complex(op.skew_part());
    CVec zbar(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) zbar[i] = std::conj(z[i]);
    const CVec lin = f * z;
    const CVec anti = s * zbar;
    CVec out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        out[i] = lin[i] - 0.5 * kI * z[i] + anti[i] + 0.5 * kI * zbar[i];
    return out;
}

double hermitian_norm_rate(const CVec& z, const PreferenceOperator& op) {
    if (z.size() != op.dim())
        throw std::invalid_argument("hermitian_norm_rate: dimension mismatch");
    const CMat s = to_complex(op.sym_part());
    CVec zbar(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) zbar[i] = std::conj(z[i]);
    CVec w = s * zbar;
    for (std::size_t i = 0; i < z.size(); ++i) w[i] += 0.5 * kI * zbar[i];
    return 2.0 * cdot(z, w).real();
}

GraphPoint polarization_projector(const Polarization& pol, const CVec& a, const CVec& b) {
    const std::size_t n = pol.dim();
    if (a.size() != n || b.size() != n)
        throw std::invalid_argument("polarization_projector: dimension mismatch");
    const CMat mbar = conj(pol.matrix());
    // (2i Im M) u = b - conj(M) a
    CMat lhs(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) lhs(i, j) = 2.0 * kI * pol.imag_part()(i, j);
    const CVec rhs = csub(b, mbar * a);
    GraphPoint out;
    out.u = linear_solve(lhs, rhs);
    out.graph_value = pol.matrix() * out.u;
    return out;
}

PsiPhi psi_phi_coords(const CVec& a, const CVec& b, const Mat& r) {
    const std::size_t n = a.size();
    if (b.size() != n) throw std::invalid_argument("psi_phi_coords: dimension mismatch");
    check_square_match(r, n, "psi_phi_coords");
    const CMat rc = to_complex(r);
    const CVec ra = rc * a;
    PsiPhi out;
    out.psi.resize(n);
    out.phi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.psi[i] = a[i] - kI * ra[i] + kI * b[i];
        out.phi[i] = a[i] + kI * ra[i] - kI * b[i];
    }
    return out;
}

PsiPhi psi_phi_coords(const PhaseState& z, const Mat& r) {
    return psi_phi_coords(to_complex(z.rho_tilde), to_complex(z.y), r);
}

std::pair<CVec, CVec> psi_phi_inverse(const CVec& psi, const CVec& phi, const Mat& r) {
    const std::size_t n = psi.size();
    if (phi.size() != n) throw std::invalid_argument("psi_phi_inverse: dimension mismatch");
    check_square_match(r, n, "psi_phi_inverse");
    CVec a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = 0.5 * (psi[i] + phi[i]);
    const CMat rc = to_complex(r);
    const CVec ra = rc * a;
    CVec b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = -kI * (psi[i] - a[i] + kI * ra[i]);
    return {std::move(a), std::move(b)};
}

CMat hermitian_generator(const PreferenceOperator& op) {
    const std::size_t n = op.dim();
    CMat h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            h(i, j) = std::complex<double>(op.sym_part()(i, j), op.skew_part()(i, j));
    return h;
}

CMat nonhermitian_generator(const PreferenceOperator& op) {
    const std::size_t n = op.dim();
    CMat h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = kI * op.generator()(i, j);
    return h;
}

ClarTrajectory clar_flow(const PreferenceOperator& op, const CVec& psi0,
                         const std::vector<double>& times) {
    if (psi0.size() != op.dim()) throw std::invalid_argument("clar_flow: dimension mismatch");
    const std::size_t n = op.dim();
    CMat gen = hermitian_generator(op);  // S + iF
    for (std::size_t i = 0; i < n; ++i) gen(i, i) += 1.0;
    // psi' = -i (I + S + iF) psi
    CMat b(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) = -kI * gen(i, j);

    ClarTrajectory traj;
    traj.times = times;
    traj.psi.reserve(times.size());
    traj.rephased.reserve(times.size());
    for (double t : times) {
        CVec psi = expm(b, t) * psi0;
        const std::complex<double> phase = std::exp(kI * t);
        CVec big = scaled(phase, psi);
        traj.psi.push_back(std::move(psi));
        traj.rephased.push_back(std::move(big));
    }
    return traj;
}

CMat projected_generator(const PreferenceOperator& op, const Polarization& pol) {
    const std::size_t n = op.dim();
    if (pol.dim() != n) throw std::invalid_argument("projected_generator: dimension mismatch");
    const CMat v = to_complex(op.generator());
    const CMat vt = to_complex(transpose(op.generator()));

    CMat gen(2 * n, 2 * n);
    CVec a(n), b(n);
    for (std::size_t col = 0; col < 2 * n; ++col) {
        std::fill(a.begin(), a.end(), std::complex<double>{});
        std::fill(b.begin(), b.end(), std::complex<double>{});
        if (col < n)
            a[col] = 1.0;
        else
            b[col - n] = 1.0;
        // X_H(a, b) = (V a + b, -V^T b)
        const CVec xa = cadd(v * a, b);
        const CVec xb = scaled(-1.0, vt * b);
        const GraphPoint g = polarization_projector(pol, xa, xb);
        for (std::size_t i = 0; i < n; ++i) {
            gen(i, col) = g.u[i];
            gen(n + i, col) = g.graph_value[i];
        }
    }
    return gen;
}

namespace {

double leaf_drift(const CMat& flow_gen, const CVec& a0, const CVec& b0,
                  const std::vector<double>& times, const Mat& r) {
    const CVec z0 = stack2(a0, b0);
    const PsiPhi start = psi_phi_coords(a0, b0, r);
    double worst = 0.0;
    for (double t : times) {
        const CVec zt = expm(flow_gen, t) * z0;
        auto [at, bt] = unstack2(zt);
        const PsiPhi now = psi_phi_coords(at, bt, r);
        worst = std::max(worst, norm2(csub(now.phi, start.phi)));
    }
    return worst;
}

}  // namespace

double clar_leaf_defect(const PreferenceOperator& op, const CVec& a0, const CVec& b0,
                        const std::vector<double>& times, const Mat& r) {
    const Polarization pol = Polarization::from_real_form(r);
    return leaf_drift(projected_generator(op, pol), a0, b0, times, r);
}

double unprojected_leaf_defect(const PreferenceOperator& op, const CVec& a0, const CVec& b0,
                               const std::vector<double>& times, const Mat& r) {
    check_square_match(r, op.dim(), "unprojected_leaf_defect");
    return leaf_drift(to_complex(lifted_generator(op)), a0, b0, times, r);
}

}  // namespace lar
