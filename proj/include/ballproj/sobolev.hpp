// Weighted Sobolev norms on the ball.  The order-k seminorm squares the
// weighted L2 norms of all order-k partials with multinomial multiplicities,
// |u|^2_{H^k} = sum_{|gamma|=k} (k over gamma) ||d_gamma u||^2, and the full
// norm stacks the seminorms for k = 0..l.  Polynomials go through the exact
// moment tables; general functions go through a quadrature rule and must
// bring their own derivatives (no numerical differentiation here).

#pragma once

#include <functional>
#include <vector>

#include "ballproj/moments.hpp"
#include "ballproj/ortho_basis.hpp"
#include "ballproj/polynomial.hpp"
#include "ballproj/quadrature.hpp"

namespace ballproj {

// A function on the ball bundled with its partial derivatives up to a
// declared order.  derivative(x, gamma) must be valid whenever
// |gamma| <= max_order; gamma = 0 is the function itself.
struct SmoothFunction {
    int dim = 1;
    int max_order = 0;
    std::function<real(std::span<const real>, const MultiIndex&)> derivative;

    real operator()(std::span<const real> x) const { return derivative(x, MultiIndex::zero(dim)); }
    // fixes one derivative as a plain integrand
    Integrand slice(const MultiIndex& gamma) const;
};

// Wraps a polynomial; every derivative is exact, any order is available.
SmoothFunction smooth_from_polynomial(const Polynomial& p);

struct SobolevNormReport {
    WeightParam weight{1, 0.0};
    int order = 0;
    std::vector<real> seminorms;  // |u|_{H^k}, k = 0..order
    real total{0};                // ||u||_{H^order}
};

// Exact order-k seminorm of a polynomial via the moment table.
real seminorm_poly(const MomentTable& table, const Polynomial& u, int k);

// Exact full norm report of a polynomial, orders 0..l.
SobolevNormReport hnorm_poly(const MomentTable& table, const Polynomial& u, int l);

// Quadrature norm report of a general function; requires l <= f.max_order.
SobolevNormReport hnorm_function(const WeightParam& w, const SmoothFunction& f, int l,
                                 const BallRule& rule);

// || f - S_n(f) ||_{H^k} for k = 0..r, where S_n(f) synthesizes the degree-n
// truncation of the quadrature expansion of f on the given basis.  The
// residual derivatives combine the analytic oracle for f with exact
// polynomial derivatives of the truncation.
std::vector<real> residual_norms(const OrthoBasis& basis, const SmoothFunction& f,
                                 const BallRule& rule, int n, int r);

// Same, but reusing an expansion already computed with project_function
// (useful when sweeping n for one f).
std::vector<real> residual_norms(const OrthoBasis& basis, const SmoothFunction& f,
                                 const BallRule& rule, const Expansion& expansion, int n, int r);

}  // namespace ballproj
