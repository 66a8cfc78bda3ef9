#include "lar/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lar {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double abs_val(double x) { return std::abs(x); }
double abs_val(const std::complex<double>& x) { return std::abs(x); }

template <typename T>
void check_same_shape(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix shape mismatch");
}

}  // namespace

// ---- elementwise / product operations --------------------------------------

template <typename T>
DenseMatrix<T> operator+(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
    check_same_shape(a, b);
    DenseMatrix<T> c(a.rows(), a.cols());
    for (std::size_t i = 0; i < c.storage().size(); ++i)
        c.storage()[i] = a.storage()[i] + b.storage()[i];
    return c;
}

template <typename T>
DenseMatrix<T> operator-(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
    check_same_shape(a, b);
    DenseMatrix<T> c(a.rows(), a.cols());
    for (std::size_t i = 0; i < c.storage().size(); ++i)
        c.storage()[i] = a.storage()[i] - b.storage()[i];
    return c;
}

template <typename T>
DenseMatrix<T> operator*(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
    DenseMatrix<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T aik = a(i, k);
            if (aik == T{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

template <typename T>
DenseMatrix<T> operator*(T s, const DenseMatrix<T>& a) {
    DenseMatrix<T> c(a.rows(), a.cols());
    for (std::size_t i = 0; i < c.storage().size(); ++i) c.storage()[i] = s * a.storage()[i];
    return c;
}

template <typename T>
std::vector<T> operator*(const DenseMatrix<T>& a, const std::vector<T>& x) {
    if (a.cols() != x.size()) throw std::invalid_argument("matvec shape mismatch");
    std::vector<T> y(a.rows(), T{});
    for (std::size_t i = 0; i < a.rows(); ++i) {
        T acc{};
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

template DenseMatrix<double> operator+(const DenseMatrix<double>&, const DenseMatrix<double>&);
template DenseMatrix<std::complex<double>> operator+(const DenseMatrix<std::complex<double>>&,
                                                     const DenseMatrix<std::complex<double>>&);
template DenseMatrix<double> operator-(const DenseMatrix<double>&, const DenseMatrix<double>&);
template DenseMatrix<std::complex<double>> operator-(const DenseMatrix<std::complex<double>>&,
                                                     const DenseMatrix<std::complex<double>>&);
template DenseMatrix<double> operator*(const DenseMatrix<double>&, const DenseMatrix<double>&);
template DenseMatrix<std::complex<double>> operator*(const DenseMatrix<std::complex<double>>&,
                                                     const DenseMatrix<std::complex<double>>&);
template DenseMatrix<double> operator*(double, const DenseMatrix<double>&);
template DenseMatrix<std::complex<double>> operator*(std::complex<double>,
                                                     const DenseMatrix<std::complex<double>>&);
template std::vector<double> operator*(const DenseMatrix<double>&, const std::vector<double>&);
template std::vector<std::complex<double>> operator*(const DenseMatrix<std::complex<double>>&,
                                                     const std::vector<std::complex<double>>&);

Mat transpose(const Mat& a) {
    Mat t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

CMat transpose(const CMat& a) {
    CMat t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

CMat conj_transpose(const CMat& a) {
    CMat t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = std::conj(a(i, j));
    return t;
}

CMat conj(const CMat& a) {
    CMat c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.storage().size(); ++i) c.storage()[i] = std::conj(a.storage()[i]);
    return c;
}

CMat to_complex(const Mat& a) {
    CMat c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.storage().size(); ++i) c.storage()[i] = a.storage()[i];
    return c;
}

CVec to_complex(const Vec& x) { return CVec(x.begin(), x.end()); }

Mat real_part(const CMat& a) {
    Mat r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.storage().size(); ++i) r.storage()[i] = a.storage()[i].real();
    return r;
}

Vec real_part(const CVec& x) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i].real();
    return r;
}

Vec imag_part(const CVec& x) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i].imag();
    return r;
}

// ---- norms -----------------------------------------------------------------

namespace {

template <typename T>
double frob_norm_impl(const DenseMatrix<T>& a) {
    double s = 0;
    for (const auto& v : a.storage()) s += abs_val(v) * abs_val(v);
    return std::sqrt(s);
}

template <typename T>
double one_norm_impl(const DenseMatrix<T>& a) {
    double best = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double col = 0;
        for (std::size_t i = 0; i < a.rows(); ++i) col += abs_val(a(i, j));
        best = std::max(best, col);
    }
    return best;
}

}  // namespace

double frob_norm(const Mat& a) { return frob_norm_impl(a); }
double frob_norm(const CMat& a) { return frob_norm_impl(a); }
double one_norm(const Mat& a) { return one_norm_impl(a); }
double one_norm(const CMat& a) { return one_norm_impl(a); }

double max_abs(const Mat& a) {
    double m = 0;
    for (double v : a.storage()) m = std::max(m, std::abs(v));
    return m;
}

double dot(const Vec& x, const Vec& y) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

std::complex<double> cdot(const CVec& x, const CVec& y) {
    std::complex<double> s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

double norm2(const CVec& x) {
    double s = 0;
    for (const auto& v : x) s += std::norm(v);
    return std::sqrt(s);
}

double max_abs(const Vec& x) {
    double m = 0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

double max_abs(const CVec& x) {
    double m = 0;
    for (const auto& v : x) m = std::max(m, std::abs(v));
    return m;
}

Vec axpy(double a, const Vec& x, const Vec& y) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i] + y[i];
    return r;
}

Vec scaled(double a, const Vec& x) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i];
    return r;
}

CVec scaled(std::complex<double> a, const CVec& x) {
    CVec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i];
    return r;
}

CVec cadd(const CVec& x, const CVec& y) {
    CVec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return r;
}

CVec csub(const CVec& x, const CVec& y) {
    CVec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

bool all_finite(const Mat& a) {
    for (double v : a.storage())
        if (!std::isfinite(v)) return false;
    return true;
}

bool all_finite(const CMat& a) {
    for (const auto& v : a.storage())
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

bool all_finite(const Vec& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

// ---- LU --------------------------------------------------------------------

template <typename T>
T LuFactors<T>::det() const {
    T d = static_cast<T>(sign);
    for (std::size_t i = 0; i < lu.rows(); ++i) d *= lu(i, i);
    return d;
}

template <typename T>
LuFactors<T> lu_factor(const DenseMatrix<T>& a, double pivot_tol) {
    if (!a.square()) throw std::invalid_argument("lu_factor: matrix must be square");
    const std::size_t n = a.rows();
    LuFactors<T> f;
    f.lu = a;
    f.perm.resize(n);
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
    const double scale = std::max(one_norm_impl(a), 1e-300);

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = abs_val(f.lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = abs_val(f.lu(i, k));
            if (v > best) { best = v; piv = i; }
        }
        if (best <= pivot_tol * scale)
            throw singular_matrix_error("lu_factor: pivot below tolerance");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
            f.sign = -f.sign;
        }
        const T pivot = f.lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const T m = f.lu(i, k) / pivot;
            f.lu(i, k) = m;
            for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= m * f.lu(k, j);
        }
    }
    return f;
}

template <typename T>
std::vector<T> lu_solve(const LuFactors<T>& f, const std::vector<T>& b) {
    const std::size_t n = f.lu.rows();
    if (b.size() != n) throw std::invalid_argument("lu_solve: rhs size mismatch");
    std::vector<T> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (std::size_t i = 1; i < n; ++i) {
        T acc = x[i];
        for (std::size_t j = 0; j < i; ++j) acc -= f.lu(i, j) * x[j];
        x[i] = acc;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        T acc = x[ii];
        for (std::size_t j = ii + 1; j < n; ++j) acc -= f.lu(ii, j) * x[j];
        x[ii] = acc / f.lu(ii, ii);
    }
    return x;
}

template <typename T>
DenseMatrix<T> lu_solve(const LuFactors<T>& f, const DenseMatrix<T>& b) {
    const std::size_t n = f.lu.rows();
    DenseMatrix<T> x(n, b.cols());
    std::vector<T> col(n);
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = b(i, j);
        const auto sol = lu_solve(f, col);
        for (std::size_t i = 0; i < n; ++i) x(i, j) = sol[i];
    }
    return x;
}

template struct LuFactors<double>;
template struct LuFactors<std::complex<double>>;
template LuFactors<double> lu_factor(const DenseMatrix<double>&, double);
template LuFactors<std::complex<double>> lu_factor(const DenseMatrix<std::complex<double>>&, double);
template std::vector<double> lu_solve(const LuFactors<double>&, const std::vector<double>&);
template std::vector<std::complex<double>> lu_solve(const LuFactors<std::complex<double>>&,
                                                    const std::vector<std::complex<double>>&);
template DenseMatrix<double> lu_solve(const LuFactors<double>&, const DenseMatrix<double>&);
template DenseMatrix<std::complex<double>> lu_solve(const LuFactors<std::complex<double>>&,
                                                    const DenseMatrix<std::complex<double>>&);

Vec linear_solve(const Mat& a, const Vec& b, double pivot_tol) {
    return lu_solve(lu_factor(a, pivot_tol), b);
}

CVec linear_solve(const CMat& a, const CVec& b, double pivot_tol) {
    return lu_solve(lu_factor(a, pivot_tol), b);
}

// ---- symmetric/skew split ----------------------------------------------------

std::pair<Mat, Mat> sym_skew_split(const Mat& v) {
    if (!v.square()) throw std::invalid_argument("sym_skew_split: matrix must be square");
    if (!all_finite(v)) throw std::invalid_argument("sym_skew_split: non-finite entries");
    const std::size_t n = v.rows();
    Mat s(n, n), f(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            s(i, j) = 0.5 * (v(i, j) + v(j, i));
            f(i, j) = 0.5 * (v(i, j) - v(j, i));
        }
    }
    return {std::move(s), std::move(f)};
}

// ---- matrix exponential ------------------------------------------------------

namespace {

// Padé order 13 coefficients (numerator; denominator uses alternating signs).
constexpr double kPade13[] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

// 1-norm threshold below which the order-13 approximant reaches double accuracy.
constexpr double kPadeTheta13 = 5.371920351148152;

template <typename T>
DenseMatrix<T> expm_impl(const DenseMatrix<T>& a0, double t) {
    if (!a0.square()) throw std::invalid_argument("expm: matrix must be square");
    const std::size_t n = a0.rows();
    using M = DenseMatrix<T>;

    M a(n, n);
    for (std::size_t i = 0; i < a.storage().size(); ++i) a.storage()[i] = a0.storage()[i] * t;

    const double nrm = one_norm_impl(a);
    if (!std::isfinite(nrm)) throw std::range_error("expm: non-finite scaled input");

    int squarings = 0;
    if (nrm > kPadeTheta13) {
        squarings = static_cast<int>(std::ceil(std::log2(nrm / kPadeTheta13)));
        const double scale = std::ldexp(1.0, -squarings);
        for (auto& v : a.storage()) v *= scale;
    }

    const M a2 = a * a;
    const M a4 = a2 * a2;
    const M a6 = a4 * a2;
    const M id = M::identity(n);
    const auto c = [](double b) { return static_cast<T>(b); };

    M w = c(kPade13[13]) * a6 + c(kPade13[11]) * a4 + c(kPade13[9]) * a2;
    M u = a6 * w;
    u = u + c(kPade13[7]) * a6 + c(kPade13[5]) * a4 + c(kPade13[3]) * a2 + c(kPade13[1]) * id;
    u = a * u;

    w = c(kPade13[12]) * a6 + c(kPade13[10]) * a4 + c(kPade13[8]) * a2;
    M v = a6 * w;
    v = v + c(kPade13[6]) * a6 + c(kPade13[4]) * a4 + c(kPade13[2]) * a2 + c(kPade13[0]) * id;

    // exp(a) ~= (v - u)^{-1} (v + u)
    M result = lu_solve(lu_factor(v - u, 0.0 /* rely on pivoting; Padé denom is well-conditioned */),
                        v + u);
    for (int s = 0; s < squarings; ++s) result = result * result;

    for (const auto& entry : result.storage()) {
        const double m = abs_val(entry);
        if (!std::isfinite(m)) throw std::range_error("expm: overflow in result");
    }
    return result;
}

}  // namespace

Mat expm(const Mat& a, double t) { return expm_impl(a, t); }
CMat expm(const CMat& a, double t) { return expm_impl(a, t); }

// ---- symmetric eigenproblem: cyclic Jacobi ------------------------------------

SymEigenDecomposition sym_eig(const Mat& s_in, double asym_tol) {
    if (!s_in.square()) throw std::invalid_argument("sym_eig: matrix must be square");
    const std::size_t n = s_in.rows();
    const double scale = std::max(frob_norm(s_in), 1e-300);
    {
        const Mat d = s_in - transpose(s_in);
        if (frob_norm(d) > asym_tol * scale)
            throw std::domain_error("sym_eig: input asymmetry beyond tolerance");
    }

    // Symmetrize exactly, then run row-major cyclic sweeps.
    Mat a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (s_in(i, j) + s_in(j, i));
    Mat q = Mat::identity(n);

    const double stop = 1e-15 * std::max(1.0, frob_norm(a));
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += 2 * a(i, j) * a(i, j);
        off = std::sqrt(off);
        if (off <= stop) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t r = p + 1; r < n; ++r) {
                const double apr = a(p, r);
                if (apr == 0.0) continue;
                const double theta = (a(r, r) - a(p, p)) / (2.0 * apr);
                double tt;
                if (std::abs(theta) > 1e150) {
                    tt = 0.5 / theta;
                } else {
                    tt = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0) tt = -tt;
                }
                const double c = 1.0 / std::sqrt(tt * tt + 1.0);
                const double sn = tt * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akr = a(k, r);
                    a(k, p) = c * akp - sn * akr;
                    a(k, r) = sn * akp + c * akr;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), ark = a(r, k);
                    a(p, k) = c * apk - sn * ark;
                    a(r, k) = sn * apk + c * ark;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double qkp = q(k, p), qkr = q(k, r);
                    q(k, p) = c * qkp - sn * qkr;
                    q(k, r) = sn * qkp + c * qkr;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    SymEigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Mat(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = a(order[j], order[j]);
        std::size_t imax = 0;
        double vmax = 0;
        for (std::size_t i = 0; i < n; ++i) {
            out.eigenvectors(i, j) = q(i, order[j]);
            if (std::abs(out.eigenvectors(i, j)) > vmax) {
                vmax = std::abs(out.eigenvectors(i, j));
                imax = i;
            }
        }
        if (out.eigenvectors(imax, j) < 0)
            for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = -out.eigenvectors(i, j);
    }
    return out;
}

// ---- general eigenproblem ------------------------------------------------------

namespace {

// Householder reduction to upper Hessenberg form, in place.
void hessenberg_reduce(Mat& a) {
    const std::size_t n = a.rows();
    if (n < 3) return;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double xnorm = 0;
        for (std::size_t i = k + 1; i < n; ++i) xnorm += a(i, k) * a(i, k);
        xnorm = std::sqrt(xnorm);
        if (xnorm == 0.0) continue;

        Vec v(n, 0.0);
        const double alpha = (a(k + 1, k) >= 0) ? -xnorm : xnorm;
        v[k + 1] = a(k + 1, k) - alpha;
        for (std::size_t i = k + 2; i < n; ++i) v[i] = a(i, k);
        double vn2 = 0;
        for (std::size_t i = k + 1; i < n; ++i) vn2 += v[i] * v[i];
        if (vn2 == 0.0) continue;
        const double beta = 2.0 / vn2;

        // A <- (I - beta v v^T) A
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0;
            for (std::size_t i = k + 1; i < n; ++i) s += v[i] * a(i, j);
            s *= beta;
            for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= s * v[i];
        }
        // A <- A (I - beta v v^T)
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0;
            for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
            s *= beta;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * v[j];
        }
        a(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

double sign_of(double a, double b) { return b >= 0 ? std::abs(a) : -std::abs(a); }

// Francis double-shift QR on an upper Hessenberg matrix; eigenvalues only.
// Classic hqr control flow with exceptional shifts every 10 iterations.
CVec hessenberg_eigenvalues(Mat& a) {
    const int n = static_cast<int>(a.rows());
    CVec wr(n);

    double anorm = 0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));
    if (anorm == 0.0) return wr;  // zero matrix

    int nn = n - 1;
    double t = 0.0;
    double p = 0, q = 0, r = 0, x = 0, y = 0, z = 0, w = 0, s = 0;
    while (nn >= 0) {
        int its = 0;
        int l;
        do {
            for (l = nn; l >= 1; --l) {
                s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(a(l, l - 1)) <= kEps * s) {
                    a(l, l - 1) = 0.0;
                    break;
                }
            }
            x = a(nn, nn);
            if (l == nn) {
                wr[nn--] = x + t;
            } else {
                y = a(nn - 1, nn - 1);
                w = a(nn, nn - 1) * a(nn - 1, nn);
                if (l == nn - 1) {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + sign_of(z, p);
                        wr[nn - 1] = wr[nn] = x + z;
                        if (z != 0.0) wr[nn] = x - w / z;
                    } else {
                        wr[nn - 1] = std::complex<double>(x + p, z);
                        wr[nn] = std::conj(wr[nn - 1]);
                    }
                    nn -= 2;
                } else {
                    if (its == 30)
                        throw convergence_error("general_eig: QR did not converge in 30 sweeps");
                    if (its == 10 || its == 20) {
                        t += x;
                        for (int i = 0; i <= nn; ++i) a(i, i) -= x;
                        s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    ++its;
                    int m;
                    for (m = nn - 2; m >= l; --m) {
                        z = a(m, m);
                        r = x - z;
                        s = y - z;
                        p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
                        q = a(m + 1, m + 1) - z - r - s;
                        r = a(m + 2, m + 1);
                        s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
                        const double v =
                            std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) +
                                           std::abs(a(m + 1, m + 1)));
                        if (u <= kEps * v) break;
                    }
                    for (int i = m; i < nn - 1; ++i) {
                        a(i + 2, i) = 0.0;
                        if (i != m) a(i + 2, i - 1) = 0.0;
                    }
                    for (int k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = a(k, k - 1);
                            q = a(k + 1, k - 1);
                            r = (k != nn - 1) ? a(k + 2, k - 1) : 0.0;
                            x = std::abs(p) + std::abs(q) + std::abs(r);
                            if (x != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        s = sign_of(std::sqrt(p * p + q * q + r * r), p);
                        if (s == 0.0) continue;
                        if (k == m) {
                            if (l != m) a(k, k - 1) = -a(k, k - 1);
                        } else {
                            a(k, k - 1) = -s * x;
                        }
                        p += s;
                        x = p / s;
                        y = q / s;
                        z = r / s;
                        q /= p;
                        r /= p;
                        for (int j = k; j <= nn; ++j) {
                            p = a(k, j) + q * a(k + 1, j);
                            if (k != nn - 1) {
                                p += r * a(k + 2, j);
                                a(k + 2, j) -= p * z;
                            }
                            a(k + 1, j) -= p * y;
                            a(k, j) -= p * x;
                        }
                        const int mmin = (nn < k + 3) ? nn : k + 3;
                        for (int i = l; i <= mmin; ++i) {
                            p = x * a(i, k) + y * a(i, k + 1);
                            if (k != nn - 1) {
                                p += z * a(i, k + 2);
                                a(i, k + 2) -= p * r;
                            }
                            a(i, k + 1) -= p * q;
                            a(i, k) -= p;
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }
    return wr;
}

bool is_diagonal(const Mat& a) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j && a(i, j) != 0.0) return false;
    return true;
}

// Inverse iteration for one eigenvalue, deterministic start and phase.
CVec inverse_iterate(const CMat& vc, std::complex<double> lambda, double scale) {
    const std::size_t n = vc.rows();
    CMat shifted = vc;
    double bump = 0.0;
    LuFactors<std::complex<double>> f;
    for (int attempt = 0;; ++attempt) {
        for (std::size_t i = 0; i < n; ++i)
            shifted(i, i) = vc(i, i) - lambda - std::complex<double>(bump, bump);
        try {
            f = lu_factor<std::complex<double>>(shifted, 1e-18);
            break;
        } catch (const singular_matrix_error&) {
            if (attempt >= 3) throw;
            bump = (bump == 0.0) ? 64.0 * kEps * scale : 16.0 * bump;
        }
    }

    CVec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 / static_cast<double>(i + 1);
    for (int it = 0; it < 3; ++it) {
        x = lu_solve(f, x);
        const double nrm = norm2(x);
        if (!(nrm > 0) || !std::isfinite(nrm)) {
            // re-seed and keep going; extremely defective directions land here
            for (std::size_t i = 0; i < n; ++i) x[i] = (i % 2 == 0) ? 1.0 : -0.5;
            continue;
        }
        for (auto& v : x) v /= nrm;
    }
    // Deterministic phase: largest-magnitude entry becomes real positive.
    std::size_t imax = 0;
    double best = -1;
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(x[i]) > best) {
            best = std::abs(x[i]);
            imax = i;
        }
    if (best > 0) {
        const std::complex<double> phase = std::conj(x[imax]) / std::abs(x[imax]);
        for (auto& v : x) v *= phase;
    }
    return x;
}

}  // namespace

EigenDecomposition general_eig(const Mat& v, double cond_threshold) {
    if (!v.square()) throw std::invalid_argument("general_eig: matrix must be square");
    const std::size_t n = v.rows();
    EigenDecomposition out;
    if (n == 0) return out;

    const double scale = std::max(one_norm(v), 1e-300);

    if (is_diagonal(v)) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t i, std::size_t j) { return v(i, i) < v(j, j); });
        out.eigenvalues.resize(n);
        out.eigenvectors = CMat(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            out.eigenvalues[j] = v(order[j], order[j]);
            out.eigenvectors(order[j], j) = 1.0;
        }
        out.residual_norm = 0.0;
        out.vector_condition = 1.0;
        return out;
    }

    Mat h = v;
    hessenberg_reduce(h);
    CVec eigs;
    if (n == 1) {
        eigs = {v(0, 0)};
    } else {
        eigs = hessenberg_eigenvalues(h);
    }
    std::sort(eigs.begin(), eigs.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    const CMat vc = to_complex(v);
    out.eigenvalues = eigs;
    out.eigenvectors = CMat(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const CVec x = inverse_iterate(vc, eigs[j], scale);
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = x[i];
    }

    // Residual ||V P - P diag(lambda)||_F
    const CMat vp = vc * out.eigenvectors;
    double res = 0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            const auto d = vp(i, j) - out.eigenvectors(i, j) * eigs[j];
            res += std::norm(d);
        }
    out.residual_norm = std::sqrt(res);

    // 1-norm condition of the eigenvector matrix; infinite when numerically singular.
    try {
        const auto f = lu_factor<std::complex<double>>(out.eigenvectors, 1e-16);
        const CMat pinv = lu_solve(f, CMat::identity(n));
        out.vector_condition = one_norm(out.eigenvectors) * one_norm(pinv);
    } catch (const singular_matrix_error&) {
        out.vector_condition = std::numeric_limits<double>::infinity();
    }
    out.ill_conditioned = !(out.vector_condition < cond_threshold);
    return out;
}

}  // namespace lar
