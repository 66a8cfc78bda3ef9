#include "lar/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lar {

GaussLegendreRule gauss_legendre(std::size_t order) {
    if (order == 0) throw std::invalid_argument("gauss_legendre: order must be positive");
    const std::size_t n = order;
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);

    const std::size_t m = (n + 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::size_t segments, std::size_t order) {
    const GaussLegendreRule rule = gauss_legendre(order);
    double total = 0;
    const double h = (b - a) / static_cast<double>(segments);
    for (std::size_t s = 0; s < segments; ++s) {
        const double lo = a + h * static_cast<double>(s);
        const double mid = lo + 0.5 * h;
        double acc = 0;
        for (std::size_t k = 0; k < order; ++k)
            acc += rule.weights[k] * f(mid + 0.5 * h * rule.nodes[k]);
        total += 0.5 * h * acc;
    }
    return total;
}

namespace {

// Integral over [x0, x1] of the quadratic through (ta, fa), (tb, fb), (tc, fc).
double quadratic_panel(double ta, double fa, double tb, double fb, double tc, double fc,
                       double x0, double x1) {
    // Newton form: f(x) = fa + d1 (x - ta) + d2 (x - ta)(x - tb)
    const double d1 = (fb - fa) / (tb - ta);
    const double d2 = ((fc - fb) / (tc - tb) - d1) / (tc - ta);
    auto antideriv = [&](double x) {
        const double u = x - ta;
        const double v = x - tb;
        // integral of (x-ta): u^2/2 ; of (x-ta)(x-tb): expand around x
        const double quad = (u * u * (2.0 * x - 3.0 * tb + ta)) / 6.0;
        (void)v;
        return fa * x + d1 * 0.5 * u * u + d2 * quad;
    };
    return antideriv(x1) - antideriv(x0);
}

}  // namespace

Vec cumulative_quadrature(const Vec& t, const Vec& f) {
    const std::size_t n = t.size();
    if (n != f.size()) throw std::invalid_argument("cumulative_quadrature: size mismatch");
    if (n < 3) throw std::invalid_argument("cumulative_quadrature: need at least 3 samples");
    Vec cum(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double left = 0, right = 0;
        int count = 0;
        if (k >= 1) {
            left = quadratic_panel(t[k - 1], f[k - 1], t[k], f[k], t[k + 1], f[k + 1],
                                   t[k], t[k + 1]);
            ++count;
        }
        if (k + 2 < n) {
            right = quadratic_panel(t[k], f[k], t[k + 1], f[k + 1], t[k + 2], f[k + 2],
                                    t[k], t[k + 1]);
            ++count;
        }
        const double panel = (count == 2) ? 0.5 * (left + right) : (k >= 1 ? left : right);
        cum[k + 1] = cum[k] + panel;
    }
    return cum;
}

}  // namespace lar
