#include "lar/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lar/quadrature.hpp"

namespace lar {

Lottery::Lottery(Vec probs, double sum_tol) : probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("Lottery: empty probability vector");
    double sum = 0;
    for (double p : probs_) {
        if (!std::isfinite(p)) throw std::invalid_argument("Lottery: non-finite probability");
        if (p < 0.0) throw std::invalid_argument("Lottery: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > sum_tol)
        throw std::invalid_argument("Lottery: probabilities do not sum to 1");
}

Lottery Lottery::uniform(std::size_t n) {
    return Lottery(Vec(n, 1.0 / static_cast<double>(n)));
}

bool Lottery::interior(double eps) const {
    for (double p : probs_)
        if (p <= eps) return false;
    return true;
}

void Lottery::require_interior(double eps) const {
    if (!interior(eps)) throw std::domain_error("Lottery: boundary lottery where interior required");
}

TangentVec::TangentVec(Vec comps, double sum_tol) : comps_(std::move(comps)) {
    double sum = 0, scale = 0;
    for (double c : comps_) {
        if (!std::isfinite(c)) throw std::invalid_argument("TangentVec: non-finite component");
        sum += c;
        scale += std::abs(c);
    }
    if (std::abs(sum) > sum_tol * std::max(1.0, scale))
        throw std::invalid_argument("TangentVec: components do not sum to 0");
}

Amplitude::Amplitude(Vec rho, double norm_tol) : rho_(std::move(rho)) {
    const double n = norm2(rho_);
    if (std::abs(n - 1.0) > norm_tol)
        throw std::invalid_argument("Amplitude: vector is not unit norm");
}

Amplitude lift(const Lottery& q) {
    q.require_interior();
    Vec rho(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) rho[i] = std::sqrt(q[i]);
    return Amplitude(std::move(rho));
}

Lottery readout(const Vec& rho_tilde) {
    double z = 0;
    for (double r : rho_tilde) z += r * r;
    if (!(z > 0.0)) throw std::domain_error("readout: zero amplitude vector");
    Vec q(rho_tilde.size());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = rho_tilde[i] * rho_tilde[i] / z;
    return Lottery(std::move(q));
}

double fisher_rao_inner(const Lottery& q, const TangentVec& v, const TangentVec& w) {
    q.require_interior();
    if (v.size() != q.size() || w.size() != q.size())
        throw std::invalid_argument("fisher_rao_inner: dimension mismatch");
    double s = 0;
    for (std::size_t i = 0; i < q.size(); ++i) s += v[i] * w[i] / q[i];
    return s;
}

double perceptual_distance(const Lottery& q, const Lottery& qp, double c) {
    if (q.size() != qp.size()) throw std::invalid_argument("perceptual_distance: dimension mismatch");
    if (!(c > 0.0)) throw std::invalid_argument("perceptual_distance: scale must be positive");
    double ip = 0;
    for (std::size_t i = 0; i < q.size(); ++i) ip += std::sqrt(q[i] * qp[i]);
    ip = std::clamp(ip, -1.0, 1.0);
    return c * std::acos(ip);
}

double utility_potential(const Lottery& q, const Mat& sym_op, double sym_tol) {
    q.require_interior();
    if (!sym_op.square() || sym_op.rows() != q.size())
        throw std::invalid_argument("utility_potential: dimension mismatch");
    if (frob_norm(sym_op - transpose(sym_op)) >
        sym_tol * std::max(1.0, frob_norm(sym_op)))
        throw std::domain_error("utility_potential: operator is not symmetric");
    Vec rho(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) rho[i] = std::sqrt(q[i]);
    return 0.5 * dot(rho, sym_op * rho);
}

double beta_eval(const Lottery& q, const TangentVec& v, const Mat& evaluator) {
    q.require_interior();
    if (!evaluator.square() || evaluator.rows() != q.size() || v.size() != q.size())
        throw std::invalid_argument("beta_eval: dimension mismatch");
    Vec rho(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) rho[i] = std::sqrt(q[i]);
    const Vec vr = evaluator * rho;
    double s = 0;
    for (std::size_t i = 0; i < q.size(); ++i) s += vr[i] * v[i] / (2.0 * rho[i]);
    return s;
}

double ssb_regret(const Vec& rho, const Vec& rho_prime, const Mat& skew_op, double skew_tol) {
    if (!skew_op.square() || skew_op.rows() != rho.size() || rho_prime.size() != rho.size())
        throw std::invalid_argument("ssb_regret: dimension mismatch");
    if (frob_norm(skew_op + transpose(skew_op)) >
        skew_tol * std::max(1.0, frob_norm(skew_op)))
        throw std::domain_error("ssb_regret: operator is not skew");
    return dot(rho, skew_op * rho_prime);
}

namespace {

// Periodic cubic interpolation: knot derivatives from the cyclic tridiagonal
// system m_{k-1} + 4 m_k + m_{k+1} = 3 (p_{k+1} - p_{k-1}) (unit knot spacing).
Vec periodic_spline_slopes(const Vec& p) {
    const std::size_t k = p.size();
    Vec rhs(k);
    for (std::size_t i = 0; i < k; ++i)
        rhs[i] = 3.0 * (p[(i + 1) % k] - p[(i + k - 1) % k]);
    if (k == 1) return Vec{0.0};
    if (k == 2) {  // degenerate cycle: 4 m0 + 2 m1 = rhs0, symmetric
        return Vec{(2.0 * rhs[0] - rhs[1]) / 6.0, (2.0 * rhs[1] - rhs[0]) / 6.0};
    }

    // Sherman-Morrison on the cyclic tridiagonal [1 4 1].
    auto solve_tridiag = [&](const Vec& d, const Vec& r) {
        const std::size_t n = r.size();
        Vec cp(n), dp(n);
        cp[0] = 1.0 / d[0];
        dp[0] = r[0] / d[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double m = d[i] - cp[i - 1];
            cp[i] = 1.0 / m;
            dp[i] = (r[i] - dp[i - 1]) / m;
        }
        Vec x(n);
        x[n - 1] = dp[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
        return x;
    };

    const double gamma = -4.0;
    Vec d(k, 4.0);
    d[0] -= gamma;
    d[k - 1] -= 1.0 / gamma;
    const Vec y = solve_tridiag(d, rhs);
    Vec u(k, 0.0);
    u[0] = gamma;
    u[k - 1] = 1.0;
    const Vec zv = solve_tridiag(d, u);
    const double fact = (y[0] + y[k - 1] / gamma) / (1.0 + zv[0] + zv[k - 1] / gamma);
    Vec m(k);
    for (std::size_t i = 0; i < k; ++i) m[i] = y[i] - fact * zv[i];
    return m;
}

struct LoopSpline {
    std::vector<Vec> points;  // knots, one per distinct sample
    std::vector<Vec> slopes;  // per coordinate slopes at knots

    std::size_t segments() const { return points.size(); }

    void eval(std::size_t seg, double u, Vec& q, Vec& dq) const {
        const std::size_t k = points.size();
        const Vec& p0 = points[seg];
        const Vec& p1 = points[(seg + 1) % k];
        const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
        const double h10 = u * (1 - u) * (1 - u);
        const double h01 = u * u * (3 - 2 * u);
        const double h11 = u * u * (u - 1);
        const double g00 = 6 * u * (u - 1);
        const double g10 = (1 - u) * (1 - 3 * u);
        const double g01 = -g00;
        const double g11 = u * (3 * u - 2);
        const std::size_t n = p0.size();
        q.resize(n);
        dq.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double m0 = slopes[i][seg];
            const double m1 = slopes[i][(seg + 1) % k];
            q[i] = h00 * p0[i] + h10 * m0 + h01 * p1[i] + h11 * m1;
            dq[i] = g00 * p0[i] + g10 * m0 + g01 * p1[i] + g11 * m1;
        }
    }
};

LoopSpline build_loop_spline(const std::vector<Vec>& samples) {
    LoopSpline spline;
    spline.points.assign(samples.begin(), samples.end() - 1);
    const std::size_t n = samples.front().size();
    const std::size_t k = spline.points.size();
    spline.slopes.resize(n);
    Vec coord(k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t s = 0; s < k; ++s) coord[s] = spline.points[s][i];
        spline.slopes[i] = periodic_spline_slopes(coord);
    }
    return spline;
}

double holonomy_pass(const LoopSpline& spline, const Mat& evaluator,
                     const GaussLegendreRule& rule, std::size_t panels_per_segment) {
    const std::size_t n = spline.points.front().size();
    Vec q(n), dq(n), rho(n);
    double total = 0;
    for (std::size_t seg = 0; seg < spline.segments(); ++seg) {
        for (std::size_t panel = 0; panel < panels_per_segment; ++panel) {
            const double lo = static_cast<double>(panel) / panels_per_segment;
            const double half = 0.5 / panels_per_segment;
            const double mid = lo + half;
            for (std::size_t node = 0; node < rule.nodes.size(); ++node) {
                const double u = mid + half * rule.nodes[node];
                spline.eval(seg, u, q, dq);
                for (std::size_t i = 0; i < n; ++i) {
                    if (!(q[i] > tol::interior_eps))
                        throw std::domain_error("loop_holonomy: path exits the interior simplex");
                    rho[i] = std::sqrt(q[i]);
                }
                const Vec vr = evaluator * rho;
                double f = 0;
                for (std::size_t i = 0; i < n; ++i) f += vr[i] * dq[i] / (2.0 * rho[i]);
                total += rule.weights[node] * half * f;
            }
        }
    }
    return total;
}

}  // namespace

Holonomy loop_holonomy(const std::vector<Vec>& loop_samples, const Mat& evaluator,
                       std::size_t nodes_per_segment) {
    if (loop_samples.size() < 4)
        throw std::invalid_argument("loop_holonomy: need at least 4 samples (closed loop)");
    const std::size_t n = loop_samples.front().size();
    if (!evaluator.square() || evaluator.rows() != n)
        throw std::invalid_argument("loop_holonomy: dimension mismatch");
    for (const Vec& s : loop_samples) {
        if (s.size() != n) throw std::invalid_argument("loop_holonomy: ragged samples");
        Lottery q(s);
        q.require_interior();
    }
    {
        const Vec& first = loop_samples.front();
        const Vec& last = loop_samples.back();
        double gap = 0;
        for (std::size_t i = 0; i < n; ++i) gap = std::max(gap, std::abs(first[i] - last[i]));
        if (gap > tol::loop_closure)
            throw std::invalid_argument("loop_holonomy: loop is not closed (first != last)");
    }

    const LoopSpline spline = build_loop_spline(loop_samples);
    const GaussLegendreRule rule = gauss_legendre(nodes_per_segment);
    const double coarse = holonomy_pass(spline, evaluator, rule, 1);
    const double fine = holonomy_pass(spline, evaluator, rule, 2);
    return {fine, std::abs(fine - coarse)};
}

TangentVec simplex_drift(const Lottery& q, const Mat& evaluator) {
    q.require_interior();
    if (!evaluator.square() || evaluator.rows() != q.size())
        throw std::invalid_argument("simplex_drift: dimension mismatch");
    const std::size_t n = q.size();
    Vec rho(n);
    for (std::size_t i = 0; i < n; ++i) rho[i] = std::sqrt(q[i]);
    const Vec vr = evaluator * rho;
    const double radial = dot(rho, vr);
    Vec drift(n);
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        drift[i] = 2.0 * rho[i] * (vr[i] - radial * rho[i]);
        sum += drift[i];
    }
    // kill the rounding residue so the result is an exact tangent vector
    const double fix = sum / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) drift[i] -= fix;
    return TangentVec(std::move(drift));
}

std::vector<Vec> fisher_circle(const Lottery& center, double radius, std::size_t samples) {
    center.require_interior();
    const std::size_t n = center.size();
    if (n < 3) throw std::invalid_argument("fisher_circle: need at least 3 outcomes");
    if (!(radius > 0.0)) throw std::invalid_argument("fisher_circle: radius must be positive");
    if (samples < 8) throw std::invalid_argument("fisher_circle: too few samples");

    Vec rho0(n);
    for (std::size_t i = 0; i < n; ++i) rho0[i] = std::sqrt(center[i]);

    // Gram-Schmidt of the first coordinate directions against rho0.
    std::vector<Vec> frame;
    for (std::size_t axis = 0; axis < n && frame.size() < 2; ++axis) {
        Vec e(n, 0.0);
        e[axis] = 1.0;
        Vec w = axpy(-dot(e, rho0), rho0, e);
        for (const Vec& f : frame) w = axpy(-dot(w, f), f, w);
        const double nrm = norm2(w);
        if (nrm > 1e-8) frame.push_back(scaled(1.0 / nrm, w));
    }
    if (frame.size() < 2) throw std::runtime_error("fisher_circle: degenerate tangent frame");

    // Fisher-Rao distance is twice the spherical one, so the sphere radius is half.
    const double half = 0.5 * radius;
    const double c = std::cos(half), s = std::sin(half);
    std::vector<Vec> loop;
    loop.reserve(samples);
    for (std::size_t k = 0; k + 1 < samples; ++k) {
        const double theta =
            2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(samples - 1);
        Vec rho(n);
        for (std::size_t i = 0; i < n; ++i)
            rho[i] = c * rho0[i] + s * (std::cos(theta) * frame[0][i] + std::sin(theta) * frame[1][i]);
        Vec q(n);
        for (std::size_t i = 0; i < n; ++i) q[i] = rho[i] * rho[i];
        // renormalize away the rounding drift so each sample is a valid lottery
        double sum = 0;
        for (double v : q) sum += v;
        for (double& v : q) v /= sum;
        loop.push_back(std::move(q));
    }
    loop.push_back(loop.front());
    return loop;
}

Mat traceless_gauge(const Mat& v) {
    if (!v.square()) throw std::invalid_argument("traceless_gauge: matrix must be square");
    double tr = 0;
    for (std::size_t i = 0; i < v.rows(); ++i) tr += v(i, i);
    Mat out = v;
    const double shift = tr / static_cast<double>(v.rows());
    for (std::size_t i = 0; i < v.rows(); ++i) out(i, i) -= shift;
    return out;
}

}  // namespace lar
