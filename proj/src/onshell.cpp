#include "lar/onshell.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lar {

PreferenceOperator::PreferenceOperator(Mat generator) : full_(std::move(generator)) {
    if (!full_.square()) throw std::invalid_argument("PreferenceOperator: matrix must be square");
    if (!all_finite(full_)) throw std::invalid_argument("PreferenceOperator: non-finite entries");
    auto [s, f] = sym_skew_split(full_);
    sym_ = std::move(s);
    skew_ = std::move(f);
    sym_spectrum_ = sym_eig(sym_);
    min_sym_eig_ = sym_spectrum_.eigenvalues.front();
}

PreferenceOperator PreferenceOperator::from_split(const Mat& sym, const Mat& skew,
                                                  double check_tol) {
    if (!sym.square() || !skew.square() || sym.rows() != skew.rows())
        throw std::invalid_argument("PreferenceOperator: parts must be square and same size");
    if (frob_norm(sym - transpose(sym)) > check_tol * std::max(1.0, frob_norm(sym)))
        throw std::domain_error("PreferenceOperator: declared symmetric part is not symmetric");
    if (frob_norm(skew + transpose(skew)) > check_tol * std::max(1.0, frob_norm(skew)))
        throw std::domain_error("PreferenceOperator: declared skew part is not skew");
    return PreferenceOperator(sym + skew);
}

double AmplitudeTrajectory::normaliser(std::size_t k) const {
    const double r = norm2(states[k]);
    return r * r;
}

std::vector<std::pair<std::size_t, std::size_t>> AmplitudeTrajectory::support_events() const {
    std::vector<std::pair<std::size_t, std::size_t>> events;
    for (std::size_t k = 1; k < states.size(); ++k) {
        for (std::size_t i = 0; i < states[k].size(); ++i) {
            const double prev = states[k - 1][i];
            const double cur = states[k][i];
            if (prev == 0.0 || cur == 0.0 || (prev < 0.0) != (cur < 0.0))
                events.emplace_back(k, i);
        }
    }
    return events;
}

Vec lar_field(const Vec& rho, const PreferenceOperator& op, double norm_tol) {
    if (rho.size() != op.dim()) throw std::invalid_argument("lar_field: dimension mismatch");
    if (std::abs(norm2(rho) - 1.0) > norm_tol)
        throw std::domain_error("lar_field: state must be unit norm");
    const Vec vr = op.generator() * rho;
    return axpy(-dot(rho, vr), rho, vr);
}

AmplitudeTrajectory onshell_flow(const PreferenceOperator& op, const Vec& rho0,
                                 const std::vector<double>& times) {
    if (rho0.size() != op.dim()) throw std::invalid_argument("onshell_flow: dimension mismatch");
    if (!(norm2(rho0) > 0.0)) throw std::domain_error("onshell_flow: zero initial amplitude");
    AmplitudeTrajectory traj;
    traj.times = times;
    traj.states.reserve(times.size());
    for (double t : times) traj.states.push_back(expm(op.generator(), t) * rho0);
    return traj;
}

PolarRates polar_rates(const Vec& rho_tilde, const PreferenceOperator& op) {
    if (rho_tilde.size() != op.dim()) throw std::invalid_argument("polar_rates: dimension mismatch");
    const double r = norm2(rho_tilde);
    if (!(r > 0.0)) throw std::domain_error("polar_rates: zero amplitude vector");
    const Vec rho = scaled(1.0 / r, rho_tilde);
    const double rayleigh = dot(rho, op.sym_part() * rho);
    PolarRates out;
    out.radial_rate = rayleigh * r;
    const Vec vr = op.generator() * rho;
    out.dir_rate = axpy(-rayleigh, rho, vr);  // (F + S - <rho,S rho> I) rho
    return out;
}

ClockSeries entropic_clock(const AmplitudeTrajectory& traj, const PreferenceOperator& op) {
    const double lmin = op.min_sym_eigenvalue();
    ClockSeries out;
    out.sigma_plus.resize(traj.times.size());
    out.production.resize(traj.times.size());
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double r = norm2(traj.states[k]);
        if (!(r > 0.0)) throw std::domain_error("entropic_clock: zero state on trajectory");
        out.sigma_plus[k] = std::log(r) - lmin * traj.times[k];
        const Vec rho = scaled(1.0 / r, traj.states[k]);
        out.production[k] = dot(rho, op.sym_part() * rho) - lmin;
    }
    return out;
}

FreeEnergyCheck free_energy_check(const Vec& rho_tilde) {
    double z = 0;
    for (double v : rho_tilde) z += v * v;
    if (!(z > 0.0)) throw std::domain_error("free_energy_check: zero amplitude vector");
    FreeEnergyCheck out;
    out.log_z = std::log(z);
    double dual = 0;
    for (double v : rho_tilde) {
        const double w = v * v;
        if (w == 0.0) continue;  // 0 log 0 = 0
        const double q = w / z;
        dual += q * std::log(w) - q * std::log(q);
    }
    out.dual = dual;
    out.defect = std::abs(out.log_z - out.dual);
    return out;
}

Lottery logit_posterior(const Lottery& q0, const Vec& theta, double horizon) {
    q0.require_interior();
    if (theta.size() != q0.size()) throw std::invalid_argument("logit_posterior: dimension mismatch");
    const std::size_t n = q0.size();
    double shift = theta[0];
    for (double th : theta) shift = std::max(shift, th);
    Vec w(n);
    double z = 0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = q0[i] * std::exp(2.0 * horizon * (theta[i] - shift));
        z += w[i];
    }
    for (double& v : w) v /= z;
    return Lottery(std::move(w));
}

PeuLimit peu_limit(const Mat& sym_op, const Vec& rho0, double gap_tol, double overlap_tol) {
    if (!sym_op.square() || sym_op.rows() != rho0.size())
        throw std::invalid_argument("peu_limit: dimension mismatch");
    const double r0 = norm2(rho0);
    if (!(r0 > 0.0)) throw std::domain_error("peu_limit: zero initial amplitude");
    const SymEigenDecomposition eig = sym_eig(sym_op);
    const std::size_t n = sym_op.rows();
    if (n < 2) throw std::invalid_argument("peu_limit: need at least two outcomes");

    PeuLimit out{Lottery::uniform(n), 0.0};
    out.gap = eig.eigenvalues[n - 1] - eig.eigenvalues[n - 2];
    if (!(out.gap > gap_tol))
        throw degenerate_spectrum_error("peu_limit: top eigenvalue is not simple");

    Vec w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = eig.eigenvectors(i, n - 1);
    if (std::abs(dot(w, rho0)) / r0 <= overlap_tol)
        throw orthogonal_start_error("peu_limit: initial amplitude orthogonal to dominant mode");

    Vec q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = w[i] * w[i];
    double sum = 0;
    for (double v : q) sum += v;
    for (double& v : q) v /= sum;
    out.q_star = Lottery(std::move(q));
    return out;
}

}  // namespace lar
