#include "lar/lifted.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lar/quadrature.hpp"

namespace lar {

namespace {

Vec stack(const PhaseState& z) {
    Vec out;
    out.reserve(z.rho_tilde.size() + z.y.size());
    out.insert(out.end(), z.rho_tilde.begin(), z.rho_tilde.end());
    out.insert(out.end(), z.y.begin(), z.y.end());
    return out;
}

PhaseState unstack(const Vec& v) {
    const std::size_t n = v.size() / 2;
    PhaseState z;
    z.rho_tilde.assign(v.begin(), v.begin() + n);
    z.y.assign(v.begin() + n, v.end());
    return z;
}

void check_state(const PreferenceOperator& op, const PhaseState& z, const char* where) {
    if (z.rho_tilde.size() != op.dim() || z.y.size() != op.dim())
        throw std::invalid_argument(std::string(where) + ": phase state dimension mismatch");
    if (!all_finite(z.rho_tilde) || !all_finite(z.y))
        throw std::invalid_argument(std::string(where) + ": non-finite phase state");
}

}  // namespace

Vec LiftedTrajectory::lambda_series() const {
    Vec out(states.size());
    for (std::size_t k = 0; k < states.size(); ++k)
        out[k] = 2.0 * dot(states[k].rho_tilde, states[k].y);
    return out;
}

Vec LiftedTrajectory::residual_sq_series() const {
    Vec out(states.size());
    for (std::size_t k = 0; k < states.size(); ++k) out[k] = dot(states[k].y, states[k].y);
    return out;
}

Vec LiftedTrajectory::normaliser_series() const {
    Vec out(states.size());
    for (std::size_t k = 0; k < states.size(); ++k)
        out[k] = dot(states[k].rho_tilde, states[k].rho_tilde);
    return out;
}

Vec LiftedTrajectory::sigma_series() const {
    Vec out(states.size());
    for (std::size_t k = 0; k < states.size(); ++k) out[k] = std::log(norm2(states[k].rho_tilde));
    return out;
}

Mat lifted_generator(const PreferenceOperator& op) {
    const std::size_t n = op.dim();
    Mat a(2 * n, 2 * n);
    const Mat& v = op.generator();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) = v(i, j);
            a(n + i, n + j) = -v(j, i);
        }
        a(i, n + i) = 1.0;
    }
    return a;
}

Mat symplectic_form(std::size_t n) {
    Mat j(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        j(i, n + i) = 1.0;
        j(n + i, i) = -1.0;
    }
    return j;
}

LiftedTrajectory lifted_flow(const PreferenceOperator& op, const PhaseState& z0,
                             const std::vector<double>& times) {
    check_state(op, z0, "lifted_flow");
    const Mat gen = lifted_generator(op);
    const Vec packed = stack(z0);
    LiftedTrajectory traj;
    traj.times = times;
    traj.states.reserve(times.size());
    for (double t : times) traj.states.push_back(unstack(expm(gen, t) * packed));
    return traj;
}

double symplectic_defect(const PreferenceOperator& op, double t) {
    const Mat phi = expm(lifted_generator(op), t);
    const Mat j = symplectic_form(op.dim());
    return frob_norm(transpose(phi) * j * phi - j);
}

WittShearSplit witt_shear_split(const PreferenceOperator& op) {
    const std::size_t n = op.dim();
    WittShearSplit out{Mat(2 * n, 2 * n), Mat(2 * n, 2 * n)};
    const Mat& v = op.generator();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out.para_unitary(i, j) = v(i, j);
            out.para_unitary(n + i, n + j) = -v(j, i);
        }
        out.shear(i, n + i) = 1.0;
    }
    return out;
}

NeutralIndex neutral_index(const LiftedTrajectory& traj) {
    if (traj.times.size() < 3)
        throw std::invalid_argument("neutral_index: grid too coarse for the quadrature");
    NeutralIndex out{traj.lambda_series(), 0.0};
    const Vec ysq = traj.residual_sq_series();
    const Vec cum = cumulative_quadrature(traj.times, ysq);
    for (std::size_t k = 0; k < out.lambda.size(); ++k) {
        const double defect = std::abs(out.lambda[k] - out.lambda[0] - 2.0 * cum[k]);
        out.balance_defect = std::max(out.balance_defect, defect);
    }
    return out;
}

namespace {

std::size_t grid_index(const std::vector<double>& times, double t, const char* where) {
    const double span = std::max(1.0, std::abs(times.back() - times.front()));
    for (std::size_t k = 0; k < times.size(); ++k)
        if (std::abs(times[k] - t) <= 1e-9 * span) return k;
    throw std::invalid_argument(std::string(where) + ": time does not match a grid point");
}

}  // namespace

ActionAccumulation action_accumulation(const LiftedTrajectory& traj, double t0, double t) {
    if (traj.times.size() < 3)
        throw std::invalid_argument("action_accumulation: grid too coarse for the quadrature");
    const std::size_t k0 = grid_index(traj.times, t0, "action_accumulation");
    const std::size_t k1 = grid_index(traj.times, t, "action_accumulation");
    if (k1 < k0) throw std::invalid_argument("action_accumulation: t must not precede t0");
    const Vec ysq = traj.residual_sq_series();
    const Vec cum = cumulative_quadrature(traj.times, ysq);

    ActionAccumulation out;
    out.value = cum[k1] - cum[k0];

    // Richardson estimate from the half-resolution grid, when one exists.
    if (traj.times.size() >= 5) {
        Vec ht, hy;
        for (std::size_t k = 0; k < traj.times.size(); k += 2) {
            ht.push_back(traj.times[k]);
            hy.push_back(ysq[k]);
        }
        if ((traj.times.size() - 1) % 2 == 0 && k0 % 2 == 0 && k1 % 2 == 0 && ht.size() >= 3) {
            const Vec hcum = cumulative_quadrature(ht, hy);
            const double coarse = hcum[k1 / 2] - hcum[k0 / 2];
            out.error_estimate = std::abs(out.value - coarse) / 15.0;
        } else {
            out.error_estimate = std::abs(out.value) * 1e-12;
        }
    }
    return out;
}

std::optional<double> cone_crossing_time(const PreferenceOperator& op, const PhaseState& z0,
                                         double horizon, double time_tol) {
    check_state(op, z0, "cone_crossing_time");
    if (!(horizon > 0.0)) throw std::invalid_argument("cone_crossing_time: horizon must be positive");

    const double lambda0 = 2.0 * dot(z0.rho_tilde, z0.y);
    const double residual0 = norm2(z0.y);
    if (lambda0 > 0.0) return std::nullopt;  // forward Lambda stays positive
    if (lambda0 == 0.0) {
        if (residual0 > 0.0) return 0.0;  // touches the cone and departs immediately
        return std::nullopt;              // on-shell: stays on the cone forever
    }

    const Mat gen = lifted_generator(op);
    const Vec packed = stack(z0);
    auto lambda_at = [&](double t) {
        const PhaseState z = unstack(expm(gen, t) * packed);
        return 2.0 * dot(z.rho_tilde, z.y);
    };

    if (lambda_at(horizon) < 0.0) return std::nullopt;

    double lo = 0.0, hi = horizon;  // Lambda(lo) < 0 <= Lambda(hi); Lambda nondecreasing
    while (hi - lo > time_tol) {
        const double mid = 0.5 * (lo + hi);
        if (lambda_at(mid) >= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

double offshell_sigma_rate(const PhaseState& z, const PreferenceOperator& op) {
    check_state(op, z, "offshell_sigma_rate");
    const double zsq = dot(z.rho_tilde, z.rho_tilde);
    if (!(zsq > 0.0)) throw std::domain_error("offshell_sigma_rate: zero amplitude");
    const Vec rho = scaled(1.0 / std::sqrt(zsq), z.rho_tilde);
    return dot(rho, op.sym_part() * rho) + dot(z.rho_tilde, z.y) / zsq;
}

}  // namespace lar
