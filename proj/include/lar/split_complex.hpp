#ifndef LAR_SPLIT_COMPLEX_HPP
#define LAR_SPLIT_COMPLEX_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "lar/linalg.hpp"

namespace lar {

// Scalar a + b*j with j*j = +1. Multiplicative algebra only: the ring has zero
// divisors, so no division is exposed.
struct SplitScalar {
    double a = 0.0;  // real part
    double b = 0.0;  // j part

    friend SplitScalar operator+(SplitScalar x, SplitScalar y) { return {x.a + y.a, x.b + y.b}; }
    friend SplitScalar operator-(SplitScalar x, SplitScalar y) { return {x.a - y.a, x.b - y.b}; }
    friend SplitScalar operator*(SplitScalar x, SplitScalar y) {
        return {x.a * y.a + x.b * y.b, x.a * y.b + x.b * y.a};
    }
    friend SplitScalar operator*(double s, SplitScalar x) { return {s * x.a, s * x.b}; }
    friend bool operator==(SplitScalar x, SplitScalar y) { return x.a == y.a && x.b == y.b; }
};

inline SplitScalar split_conj(SplitScalar x) { return {x.a, -x.b}; }

// Eigencoordinates along the idempotents (1±j)/2: returns (lambda_plus, lambda_minus).
inline std::pair<double, double> idem_decompose(SplitScalar x) { return {x.a + x.b, x.a - x.b}; }
inline SplitScalar idem_reconstruct(double lp, double lm) {
    return {0.5 * (lp + lm), 0.5 * (lp - lm)};
}

// Unit-hyperbola phase cosh(s) + j sinh(s); identity component by convention.
inline SplitScalar hyperbolic_phase(double s) {
    return {std::cosh(s), std::sinh(s)};
}

using SplitVec = std::vector<SplitScalar>;

SplitVec make_split_vec(const Vec& plus_channel, const Vec& minus_channel);
Vec plus_channel(const SplitVec& v);
Vec minus_channel(const SplitVec& v);

// Sum of x_i^# y_i (the Krein pairing).
SplitScalar krein_pair(const SplitVec& x, const SplitVec& y);

// Para-Hermitian operator S + j F stored as the real pair; the idempotent
// reduction turns every propagation into two real matrix exponentials.
class SplitOperator {
  public:
    SplitOperator(Mat sym, Mat skew, double herm_tol = tol::sym_check);
    const Mat& sym_part() const { return sym_; }
    const Mat& skew_part() const { return skew_; }
    std::size_t dim() const { return sym_.rows(); }
    Mat plus_generator() const;   // skew + sym
    Mat minus_generator() const;  // skew - sym

  private:
    Mat sym_, skew_;
};

struct SplitTrajectory {
    std::vector<double> times;
    std::vector<SplitVec> states;
};

// Evolves d/dt Psi = j H Psi via z_pm(t) = exp(t (F±S)) z_pm(0).
SplitTrajectory para_propagate(const SplitOperator& h, const SplitVec& psi0,
                               const std::vector<double>& times);

// || exp(t(F-S))^T exp(t(F+S)) - I || — zero for exact para-unitarity.
double para_unitarity_defect(const SplitOperator& h, double t);

}  // namespace lar

#endif
