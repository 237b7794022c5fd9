// Minimal dense linear algebra over the arbitrary-precision scalar: a
// row-major matrix, fused dot/axpy kernels on raw mpfr handles (the hot
// path of basis construction), Householder tridiagonalization and Sturm
// bisection for extreme eigenvalues of symmetric matrices.

#pragma once

#include <span>
#include <vector>

#include "ballproj/scalar.hpp"

namespace ballproj {

class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, real(0)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    real& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const real& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::span<real> row(std::size_t i) { return {a_.data() + i * cols_, cols_}; }
    std::span<const real> row(std::size_t i) const { return {a_.data() + i * cols_, cols_}; }

  private:
    std::size_t rows_, cols_;
    std::vector<real> a_;
};

// sum_i a_i b_i with a single fused-multiply-add accumulator carried at the
// widest operand precision.
real dot(std::span<const real> a, std::span<const real> b);

// y += c * x, rounded into each y_i's own precision.
void axpy(const real& c, std::span<const real> x, std::span<real> y);

// A * x
std::vector<real> matvec(const Matrix& a, std::span<const real> x);

// Reduces a symmetric matrix to tridiagonal form (diagonal + sub-diagonal);
// eigenvalues are preserved, vectors are not accumulated.
void householder_tridiagonalize(Matrix a, std::vector<real>& diag, std::vector<real>& off);

// Number of eigenvalues of the symmetric tridiagonal matrix strictly below x.
int sturm_count_below(const std::vector<real>& diag, const std::vector<real>& off, const real& x);

// Largest eigenvalue of the symmetric tridiagonal matrix by bisection.
real tridiagonal_largest_eigenvalue(const std::vector<real>& diag, const std::vector<real>& off);

// All eigenvalues, ascending, by per-eigenvalue bisection.  Intended for
// Jacobi matrices of quadrature rules (simple spectra, modest sizes).
std::vector<real> tridiagonal_eigenvalues(const std::vector<real>& diag, const std::vector<real>& off);

// Largest eigenvalue of a dense symmetric matrix.
real symmetric_largest_eigenvalue(const Matrix& a);

// Least-squares slope of y against x (double precision; used for log-log
// rate fits).  Returns {slope, intercept, rms_residual}.
struct LineFit {
    double slope;
    double intercept;
    double rms_residual;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace ballproj
