#ifndef LAR_LINALG_HPP
#define LAR_LINALG_HPP

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "lar/errors.hpp"
#include "lar/tolerances.hpp"

namespace lar {

using Vec  = std::vector<double>;
using CVec = std::vector<std::complex<double>>;

// Dense row-major matrix over double or complex<double>. Immutable-by-convention:
// the engine never mutates a matrix after it is fully built.
template <typename T>
class DenseMatrix {
  public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, T{}) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    static DenseMatrix diagonal(const std::vector<T>& d) {
        DenseMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<T>& storage() { return data_; }
    const std::vector<T>& storage() const { return data_; }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

using Mat  = DenseMatrix<double>;
using CMat = DenseMatrix<std::complex<double>>;

// ---- elementwise / product operations -------------------------------------

template <typename T>
DenseMatrix<T> operator+(const DenseMatrix<T>& a, const DenseMatrix<T>& b);
template <typename T>
DenseMatrix<T> operator-(const DenseMatrix<T>& a, const DenseMatrix<T>& b);
template <typename T>
DenseMatrix<T> operator*(const DenseMatrix<T>& a, const DenseMatrix<T>& b);
template <typename T>
DenseMatrix<T> operator*(T s, const DenseMatrix<T>& a);

template <typename T>
std::vector<T> operator*(const DenseMatrix<T>& a, const std::vector<T>& x);

Mat transpose(const Mat& a);
CMat transpose(const CMat& a);
CMat conj_transpose(const CMat& a);
CMat conj(const CMat& a);

CMat to_complex(const Mat& a);
CVec to_complex(const Vec& x);
Mat real_part(const CMat& a);
Vec real_part(const CVec& x);
Vec imag_part(const CVec& x);

// ---- norms and scalar products ---------------------------------------------

double frob_norm(const Mat& a);
double frob_norm(const CMat& a);
double one_norm(const Mat& a);   // max column sum of |entries|
double one_norm(const CMat& a);
double max_abs(const Mat& a);

double dot(const Vec& x, const Vec& y);
std::complex<double> cdot(const CVec& x, const CVec& y);  // conjugate-linear in x
double norm2(const Vec& x);
double norm2(const CVec& x);
double max_abs(const Vec& x);
double max_abs(const CVec& x);

Vec axpy(double a, const Vec& x, const Vec& y);  // a*x + y
Vec scaled(double a, const Vec& x);
CVec scaled(std::complex<double> a, const CVec& x);
CVec cadd(const CVec& x, const CVec& y);
CVec csub(const CVec& x, const CVec& y);

bool all_finite(const Mat& a);
bool all_finite(const CMat& a);
bool all_finite(const Vec& x);

// ---- factorizations and algorithms ------------------------------------------

// Partial-pivot LU, shared by the solvers and the expm kernel.
template <typename T>
struct LuFactors {
    DenseMatrix<T> lu;
    std::vector<std::size_t> perm;
    int sign = 1;
    T det() const;
};

template <typename T>
LuFactors<T> lu_factor(const DenseMatrix<T>& a, double pivot_tol = tol::pivot);
template <typename T>
std::vector<T> lu_solve(const LuFactors<T>& f, const std::vector<T>& b);
template <typename T>
DenseMatrix<T> lu_solve(const LuFactors<T>& f, const DenseMatrix<T>& b);

Vec linear_solve(const Mat& a, const Vec& b, double pivot_tol = tol::pivot);
CVec linear_solve(const CMat& a, const CVec& b, double pivot_tol = tol::pivot);

// V = S + F with S symmetric and F skew.
std::pair<Mat, Mat> sym_skew_split(const Mat& v);

// exp(t*A) by Padé order 13 with 1-norm driven scaling and squaring.
// Throws std::range_error if entries leave the representable range.
Mat expm(const Mat& a, double t = 1.0);
CMat expm(const CMat& a, double t = 1.0);

struct SymEigenDecomposition {
    Vec eigenvalues;   // ascending
    Mat eigenvectors;  // orthogonal, columns matching eigenvalues
};

// Cyclic Jacobi with deterministic row-major sweep order.
SymEigenDecomposition sym_eig(const Mat& s, double asym_tol = tol::sym_check);

struct EigenDecomposition {
    CVec eigenvalues;              // sorted by (real, imag) ascending
    CMat eigenvectors;             // columns, unit norm, deterministic phase
    double residual_norm = 0.0;    // ||V P - P diag(lambda)||_F
    double vector_condition = 0.0; // 1-norm condition estimate of P
    bool ill_conditioned = false;  // vector_condition above threshold
};

// Francis double-shift QR to real Schur form (eigenvalues from 1x1/2x2 blocks),
// eigenvectors by deterministic inverse iteration.
EigenDecomposition general_eig(const Mat& v, double cond_threshold = tol::eig_condition);

}  // namespace lar

#endif
