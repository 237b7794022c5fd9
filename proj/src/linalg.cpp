#include "ballproj/linalg.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace ballproj {

namespace {

mpfr_prec_t span_max_prec(std::span<const real> v, mpfr_prec_t seed) {
    mpfr_prec_t p = seed;
    for (const real& x : v) p = std::max(p, mpfr_get_prec(x.backend().data()));
    return p;
}

}  // namespace

real dot(std::span<const real> a, std::span<const real> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    // The accumulator must be at least as wide as every operand, otherwise
    // each fma would round into a narrower target.
    mpfr_prec_t p = span_max_prec(b, span_max_prec(a, mpfr_get_default_prec()));
    real acc(0);
    mpfr_set_prec(acc.backend().data(), p);
    mpfr_set_ui(acc.backend().data(), 0u, MPFR_RNDN);
    for (std::size_t i = 0; i < a.size(); ++i) {
        mpfr_fma(acc.backend().data(), a[i].backend().data(), b[i].backend().data(),
                 acc.backend().data(), MPFR_RNDN);
    }
    return acc;
}

void axpy(const real& c, std::span<const real> x, std::span<real> y) {
    if (x.size() != y.size()) throw std::invalid_argument("axpy: length mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) {
        mpfr_fma(y[i].backend().data(), c.backend().data(), x[i].backend().data(),
                 y[i].backend().data(), MPFR_RNDN);
    }
}

std::vector<real> matvec(const Matrix& a, std::span<const real> x) {
    if (a.cols() != x.size()) throw std::invalid_argument("matvec: shape mismatch");
    std::vector<real> y;
    y.reserve(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) y.push_back(dot(a.row(i), x));
    return y;
}

void householder_tridiagonalize(Matrix a, std::vector<real>& diag, std::vector<real>& off) {
    const std::size_t n = a.rows();
    if (n == 0 || a.cols() != n) throw std::invalid_argument("householder: matrix must be square");
    diag.assign(n, real(0));
    off.assign(n, real(0));
    if (n == 1) {
        diag[0] = a(0, 0);
        return;
    }
    // Classic Householder reduction, eigenvectors not accumulated.
    for (std::size_t i = n - 1; i >= 1; --i) {
        const std::size_t l = i - 1;
        real h(0), scale(0);
        if (l > 0) {
            for (std::size_t k = 0; k <= l; ++k) scale += abs(a(i, k));
            if (scale == 0) {
                off[i] = a(i, l);
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                real f = a(i, l);
                real g = (f >= 0) ? real(-sqrt(h)) : real(sqrt(h));
                off[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0;
                for (std::size_t j = 0; j <= l; ++j) {
                    g = 0;
                    for (std::size_t k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (std::size_t k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    off[j] = g / h;
                    f += off[j] * a(i, j);
                }
                const real hh = f / (h + h);
                for (std::size_t j = 0; j <= l; ++j) {
                    f = a(i, j);
                    g = off[j] - hh * f;
                    off[j] = g;
                    for (std::size_t k = 0; k <= j; ++k) a(j, k) -= f * off[k] + g * a(i, k);
                }
            }
        } else {
            off[i] = a(i, l);
        }
    }
    off[0] = 0;
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
}

int sturm_count_below(const std::vector<real>& diag, const std::vector<real>& off, const real& x) {
    const std::size_t n = diag.size();
    int count = 0;
    real q = diag[0] - x;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) q = diag[i] - x - off[i] * off[i] / q;
        if (q == 0) {
            // x sits exactly on an eigenvalue of the leading submatrix; count
            // the boundary pivot as negative (the `count(x) = #{lambda < x}`
            // convention) and keep the recurrence finite.
            q = -ldexp(real(abs(diag[i]) + abs(off[i]) + 1), -static_cast<int>(current_precision_bits()));
        }
        if (q < 0) ++count;
    }
    return count;
}

namespace {

void gershgorin_bounds(const std::vector<real>& diag, const std::vector<real>& off, real& lo, real& hi) {
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
        real r = abs(off[i]);
        if (i + 1 < n) r += abs(off[i + 1]);
        const real a = diag[i] - r;
        const real b = diag[i] + r;
        if (i == 0 || a < lo) lo = a;
        if (i == 0 || b > hi) hi = b;
    }
}

// Bisection for the j-th smallest eigenvalue (0-based) inside [lo, hi].
real bisect_eigenvalue(const std::vector<real>& diag, const std::vector<real>& off, int j, real lo, real hi) {
    const unsigned bits = std::min(current_precision_bits(), 240u);
    real scale = abs(lo);
    if (abs(hi) > scale) scale = abs(hi);
    if (scale < 1) scale = 1;
    real tol = ldexp(scale, -static_cast<int>(bits));
    int guard = 0;
    while (hi - lo > tol && ++guard < 4000) {
        real mid = (lo + hi) / 2;
        if (sturm_count_below(diag, off, mid) >= j + 1) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return (lo + hi) / 2;
}

}  // namespace

real tridiagonal_largest_eigenvalue(const std::vector<real>& diag, const std::vector<real>& off) {
    if (diag.empty()) throw std::invalid_argument("eigenvalue of empty matrix");
    real lo(0), hi(0);
    gershgorin_bounds(diag, off, lo, hi);
    return bisect_eigenvalue(diag, off, static_cast<int>(diag.size()) - 1, lo, hi);
}

std::vector<real> tridiagonal_eigenvalues(const std::vector<real>& diag, const std::vector<real>& off) {
    if (diag.empty()) throw std::invalid_argument("eigenvalues of empty matrix");
    real lo(0), hi(0);
    gershgorin_bounds(diag, off, lo, hi);
    std::vector<real> ev;
    ev.reserve(diag.size());
    for (std::size_t j = 0; j < diag.size(); ++j)
        ev.push_back(bisect_eigenvalue(diag, off, static_cast<int>(j), lo, hi));
    return ev;
}

real symmetric_largest_eigenvalue(const Matrix& a) {
    std::vector<real> diag, off;
    householder_tridiagonalize(a, diag, off);
    return tridiagonal_largest_eigenvalue(diag, off);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit f{};
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy * sxx - sx * sxy) / det;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        ss += r * r;
    }
    f.rms_residual = std::sqrt(ss / n);
    return f;
}

}  // namespace ballproj
