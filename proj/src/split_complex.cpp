#include "lar/split_complex.hpp"

#include <cmath>
#include <stdexcept>

namespace lar {

SplitVec make_split_vec(const Vec& plus, const Vec& minus) {
    if (plus.size() != minus.size())
        throw std::invalid_argument("make_split_vec: channel size mismatch");
    SplitVec v(plus.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = idem_reconstruct(plus[i], minus[i]);
    return v;
}

Vec plus_channel(const SplitVec& v) {
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = idem_decompose(v[i]).first;
    return out;
}

Vec minus_channel(const SplitVec& v) {
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = idem_decompose(v[i]).second;
    return out;
}

SplitScalar krein_pair(const SplitVec& x, const SplitVec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("krein_pair: size mismatch");
    SplitScalar acc{};
    for (std::size_t i = 0; i < x.size(); ++i) acc = acc + split_conj(x[i]) * y[i];
    return acc;
}

SplitOperator::SplitOperator(Mat sym, Mat skew, double herm_tol)
    : sym_(std::move(sym)), skew_(std::move(skew)) {
    if (!sym_.square() || !skew_.square() || sym_.rows() != skew_.rows())
        throw std::invalid_argument("SplitOperator: parts must be square and same size");
    const double s_scale = std::max(frob_norm(sym_), 1.0);
    const double f_scale = std::max(frob_norm(skew_), 1.0);
    if (frob_norm(sym_ - transpose(sym_)) > herm_tol * s_scale)
        throw std::domain_error("SplitOperator: declared symmetric part is not symmetric");
    if (frob_norm(skew_ + transpose(skew_)) > herm_tol * f_scale)
        throw std::domain_error("SplitOperator: declared skew part is not skew");
}

Mat SplitOperator::plus_generator() const { return skew_ + sym_; }
Mat SplitOperator::minus_generator() const { return skew_ - sym_; }

SplitTrajectory para_propagate(const SplitOperator& h, const SplitVec& psi0,
                               const std::vector<double>& times) {
    if (psi0.size() != h.dim()) throw std::invalid_argument("para_propagate: state size mismatch");
    const Vec zp0 = plus_channel(psi0);
    const Vec zm0 = minus_channel(psi0);
    const Mat gp = h.plus_generator();
    const Mat gm = h.minus_generator();

    SplitTrajectory traj;
    traj.times = times;
    traj.states.reserve(times.size());
    for (double t : times) {
        const Vec zp = expm(gp, t) * zp0;
        const Vec zm = expm(gm, t) * zm0;
        traj.states.push_back(make_split_vec(zp, zm));
    }
    return traj;
}

double para_unitarity_defect(const SplitOperator& h, double t) {
    const Mat up = expm(h.plus_generator(), t);
    const Mat um = expm(h.minus_generator(), t);
    const Mat gram = transpose(um) * up;
    return frob_norm(gram - Mat::identity(h.dim()));
}

}  // namespace lar
