#ifndef LAR_TESTS_ORACLES_HPP
#define LAR_TESTS_ORACLES_HPP

// Test-only reference implementations. These stay independent of the library
// code paths they are used to check: the integrator below is a plain adaptive
// Dormand-Prince 5(4), not the matrix exponential.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lar/linalg.hpp"

namespace oracle {

template <typename S>
std::vector<S> lin_comb(const std::vector<std::vector<S>>& vs, const std::vector<double>& cs,
                        const std::vector<S>& base, double h) {
    std::vector<S> out = base;
    for (std::size_t j = 0; j < vs.size(); ++j) {
        if (cs[j] == 0.0) continue;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += (h * cs[j]) * vs[j][i];
    }
    return out;
}

template <typename S>
double err_norm(const std::vector<S>& e) {
    double m = 0;
    for (const auto& v : e) m = std::max(m, std::abs(v));
    return m;
}

// Adaptive Dormand-Prince 5(4); f(t, x) -> dx/dt.
template <typename S, typename F>
std::vector<S> dopri5(F f, std::vector<S> x, double t0, double t1, double tol = 1e-12) {
    static const double a[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
    static const double c[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static const double b5[7] = {35.0 / 384,    0.0,        500.0 / 1113, 125.0 / 192,
                                 -2187.0 / 6784, 11.0 / 84, 0.0};
    static const double b4[7] = {5179.0 / 57600,    0.0,          7571.0 / 16695, 393.0 / 640,
                                 -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

    double t = t0;
    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    double h = dir * std::max(1e-6, std::abs(t1 - t0) / 100.0);
    int steps = 0;
    while (dir * (t1 - t) > 1e-15 * std::max(1.0, std::abs(t1))) {
        if (++steps > 2000000) throw std::runtime_error("dopri5: too many steps");
        if (dir * (t + h - t1) > 0) h = t1 - t;

        std::vector<std::vector<S>> k(7);
        k[0] = f(t, x);
        for (int s = 1; s < 7; ++s) {
            std::vector<double> cs(a[s], a[s] + s);
            std::vector<std::vector<S>> used(k.begin(), k.begin() + s);
            k[s] = f(t + c[s] * h, lin_comb(used, cs, x, h));
        }
        std::vector<S> x5 = x, err(x.size(), S{});
        for (int s = 0; s < 7; ++s) {
            for (std::size_t i = 0; i < x.size(); ++i) {
                x5[i] += (h * b5[s]) * k[s][i];
                err[i] += (h * (b5[s] - b4[s])) * k[s][i];
            }
        }
        double scale = tol;
        for (const auto& v : x) scale = std::max(scale, tol * std::abs(v));
        const double e = err_norm(err) / scale;
        if (e <= 1.0) {
            t += h;
            x = std::move(x5);
        }
        const double grow = (e > 0) ? 0.9 * std::pow(e, -0.2) : 5.0;
        h *= std::clamp(grow, 0.2, 5.0);
    }
    return x;
}

// Matrix ODE oracle: X' = A X, X(0) = I, returns X(t) column by column.
inline lar::Mat flow_matrix(const lar::Mat& a, double t, double tol = 1e-12) {
    const std::size_t n = a.rows();
    lar::Mat x(n, n);
    auto f = [&](double, const std::vector<double>& v) { return a * v; };
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        const auto col = dopri5(f, e, 0.0, t, tol);
        for (std::size_t i = 0; i < n; ++i) x(i, j) = col[i];
    }
    return x;
}

// Centered difference of a scalar path.
inline double centered_diff(const std::function<double(double)>& g, double t, double dt) {
    return (g(t + dt) - g(t - dt)) / (2.0 * dt);
}

}  // namespace oracle

#endif
