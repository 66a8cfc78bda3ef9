#include "lar/readout.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lar {

ReadoutContext::ReadoutContext(Mat basis, double ortho_tol) : basis_(std::move(basis)) {
    if (!basis_.square()) throw std::invalid_argument("ReadoutContext: basis must be square");
    const Mat gram = transpose(basis_) * basis_;
    if (frob_norm(gram - Mat::identity(basis_.rows())) > ortho_tol)
        throw std::domain_error("ReadoutContext: basis is not orthogonal");
}

ReadoutContext ReadoutContext::identity(std::size_t n) {
    return ReadoutContext(Mat::identity(n));
}

ReadoutContext ReadoutContext::rotation(std::size_t n, std::size_t i, std::size_t j,
                                        double angle) {
    if (i >= n || j >= n || i == j)
        throw std::invalid_argument("ReadoutContext::rotation: bad coordinate pair");
    Mat b = Mat::identity(n);
    const double c = std::cos(angle), s = std::sin(angle);
    b(i, i) = c;
    b(j, j) = c;
    b(i, j) = -s;
    b(j, i) = s;
    return ReadoutContext(std::move(b));
}

Vec ReadoutContext::column(std::size_t k) const {
    Vec col(dim());
    for (std::size_t i = 0; i < dim(); ++i) col[i] = basis_(i, k);
    return col;
}

Lottery context_readout(const Vec& rho, const ReadoutContext& ctx, double norm_tol) {
    if (rho.size() != ctx.dim()) throw std::invalid_argument("context_readout: dimension mismatch");
    if (std::abs(norm2(rho) - 1.0) > norm_tol)
        throw std::domain_error("context_readout: state must be unit norm");
    const std::size_t n = rho.size();
    Vec q(n);
    double sum = 0;
    for (std::size_t k = 0; k < n; ++k) {
        double ip = 0;
        for (std::size_t i = 0; i < n; ++i) ip += ctx.basis()(i, k) * rho[i];
        q[k] = ip * ip;
        sum += q[k];
    }
    for (double& v : q) v /= sum;
    return Lottery(std::move(q));
}

double hyperbolic_born_check(const Vec& rho_tilde, const SplitVec& phases, double hyper_tol) {
    const std::size_t n = rho_tilde.size();
    if (phases.size() != n)
        throw std::invalid_argument("hyperbolic_born_check: dimension mismatch");
    for (const SplitScalar& u : phases) {
        const double unit = u.a * u.a - u.b * u.b;
        if (std::abs(unit - 1.0) > hyper_tol)
            throw std::domain_error("hyperbolic_born_check: phase off the unit hyperbola");
    }

    SplitVec psi(n);
    for (std::size_t i = 0; i < n; ++i) psi[i] = rho_tilde[i] * phases[i];

    // Born form: q_i = (psi_i^# psi_i) / sum_k (psi_k^# psi_k). The products are
    // real split scalars; keep the j part only to fold its rounding into the check.
    Vec intensity(n);
    double z = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const SplitScalar p = split_conj(psi[i]) * psi[i];
        intensity[i] = p.a;
        z += p.a;
    }
    if (!(z > 0.0)) throw std::domain_error("hyperbolic_born_check: zero amplitude vector");

    const Lottery direct = readout(rho_tilde);
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(intensity[i] / z - direct[i]));
    return worst;
}

InterferenceReport interference_decomposition(const PreferenceOperator& op, const Vec& rho0,
                                              double t, double cond_threshold) {
    if (rho0.size() != op.dim())
        throw std::invalid_argument("interference_decomposition: dimension mismatch");
    const EigenDecomposition eig = general_eig(op.generator(), cond_threshold);
    if (eig.ill_conditioned)
        throw convergence_error(
            "interference_decomposition: evaluator is defective or nearly so "
            "(eigenvector condition above threshold)");

    const std::size_t n = op.dim();
    const CVec coeff = linear_solve(eig.eigenvectors, to_complex(rho0));

    InterferenceReport report;
    report.eigen_residual = eig.residual_norm;
    report.vector_condition = eig.vector_condition;
    report.diagonal.resize(n);
    report.cross.resize(n);
    report.total.resize(n);

    CVec modal(n);  // e^{lambda_a t} c_a
    for (std::size_t a = 0; a < n; ++a) modal[a] = std::exp(eig.eigenvalues[a] * t) * coeff[a];

    for (std::size_t i = 0; i < n; ++i) {
        std::complex<double> amp{};
        std::complex<double> diag{};
        for (std::size_t a = 0; a < n; ++a) {
            const std::complex<double> term = eig.eigenvectors(i, a) * modal[a];
            amp += term;
            diag += term * term;
        }
        const std::complex<double> total = amp * amp;
        const std::complex<double> cross = total - diag;
        report.total[i] = total.real();
        report.diagonal[i] = diag.real();
        report.cross[i] = cross.real();
        report.max_imag_residue = std::max({report.max_imag_residue, std::abs(total.imag()),
                                            std::abs(diag.imag()), std::abs(cross.imag())});
    }

    const Vec flowed = expm(op.generator(), t) * rho0;
    double scale = 0;
    for (double v : flowed) scale = std::max(scale, v * v);
    scale = std::max(scale, 1e-300);
    for (std::size_t i = 0; i < n; ++i)
        report.flow_mismatch =
            std::max(report.flow_mismatch, std::abs(report.total[i] - flowed[i] * flowed[i]) / scale);
    return report;
}

SequentialReadout sequential_readout(const Vec& rho, const ReadoutContext& first,
                                     const ReadoutContext& second) {
    const std::size_t n = rho.size();
    if (first.dim() != n || second.dim() != n)
        throw std::invalid_argument("sequential_readout: dimension mismatch");
    const Lottery p1 = context_readout(rho, first);
    const Lottery p2 = context_readout(rho, second);

    // Rank-1 collapse onto the first context, then the overlap table.
    auto joint_of = [n](const Lottery& marginal, const ReadoutContext& a, const ReadoutContext& b) {
        Mat joint(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                double overlap = 0;
                for (std::size_t i = 0; i < n; ++i) overlap += b.basis()(i, j) * a.basis()(i, k);
                joint(k, j) = marginal[k] * overlap * overlap;
            }
        }
        return joint;
    };

    SequentialReadout out;
    out.joint = joint_of(p1, first, second);
    const Mat reversed = joint_of(p2, second, first);

    for (std::size_t k = 0; k < n; ++k) {
        double row = 0;
        for (std::size_t j = 0; j < n; ++j) {
            row += out.joint(k, j);
            out.order_defect = std::max(out.order_defect,
                                        std::abs(out.joint(k, j) - reversed(j, k)));
        }
        out.marginal_defect = std::max(out.marginal_defect, std::abs(row - p1[k]));
    }
    return out;
}

Lottery elliptic_context_readout(const CVec& psi, const ReadoutContext& ctx) {
    const std::size_t n = psi.size();
    if (ctx.dim() != n)
        throw std::invalid_argument("elliptic_context_readout: dimension mismatch");
    const double nrm = norm2(psi);
    if (!(nrm > 0.0)) throw std::domain_error("elliptic_context_readout: zero state");
    Vec q(n);
    double sum = 0;
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> ip{};
        for (std::size_t i = 0; i < n; ++i) ip += ctx.basis()(i, k) * psi[i];
        q[k] = std::norm(ip);
        sum += q[k];
    }
    for (double& v : q) v /= sum;
    return Lottery(std::move(q));
}

}  // namespace lar
