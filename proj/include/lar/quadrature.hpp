#ifndef LAR_QUADRATURE_HPP
#define LAR_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "lar/linalg.hpp"

namespace lar {

struct GaussLegendreRule {
    Vec nodes;    // on [-1, 1], ascending
    Vec weights;
};

// Nodes/weights by Newton iteration on the Legendre polynomial.
GaussLegendreRule gauss_legendre(std::size_t order);

// Integral of f over [a, b] with a composite rule: `segments` panels, `order`-point
// Gauss-Legendre on each.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::size_t segments, std::size_t order);

// Cumulative integral of sampled data: out[k] ~ integral of f from t[0] to t[k].
// Local quadratic stencils averaged where both sides exist; reproduces composite
// Simpson on uniform grids and keeps O(h^4) accuracy on smooth non-uniform grids.
// Needs at least 3 samples.
Vec cumulative_quadrature(const Vec& t, const Vec& f);

}  // namespace lar

#endif
