// Empirical convergence-rate studies for the ball projectors: weighted-L2
// truncation decay, Sobolev-norm residual decay, and the decay of the
// commutator between truncation and differentiation.  Each run sweeps a
// degree grid, measures the relevant error norm, and divides out the
// predicted power of the degree; a bounded, non-increasing ratio over the
// tail of the grid means the observed decay is at least as fast as the
// bound.  The checks are one-sided throughout: nothing here asserts that
// the predicted exponents are sharp.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ballproj/linalg.hpp"
#include "ballproj/ortho_basis.hpp"
#include "ballproj/quadrature.hpp"
#include "ballproj/test_functions.hpp"

namespace ballproj {

struct RatePoint {
    int n = 0;           // truncation degree
    double error = 0.0;  // residual norm at this degree
    double ratio = 0.0;  // error / scale^bound_exponent (scale = n or n+1)
};

// One rate sweep.  `bound_exponent` is the predicted power of the degree
// (negative means decay).  `fit` is the least-squares slope of log10(error)
// against log10(scale) over the largest grid points with positive error;
// it is reported for inspection, but `compliant` is decided by the ratio
// test alone.
struct RateReport {
    std::string id;
    WeightParam weight{1, 0.0};
    std::string function;
    int r = 0;  // Sobolev order of the measured norm
    int l = 0;  // regularity order credited to the function
    double bound_exponent = 0.0;
    std::vector<RatePoint> points;
    LineFit fit{0.0, 0.0, 0.0};
    bool fit_valid = false;
    bool compliant = false;
    std::string note;
};

// Predicted exponent e(l, r) with ||f - S_n(f)||_{H^r} = O(n^{e}) for f of
// regularity l: e = (3/2) r - l for 0 <= r <= 1 and e = 2r - 1/2 - l for
// r >= 1 (the branches agree at r = 1).  Throws unless 0 <= r <= l.
double rate_bound_exponent(int l, int r);

// Degree grids matched to the conditioning caps of the basis build.
std::vector<int> default_degree_grid(int dim);

// Weighted-L2 truncation errors ||f - S_n(f)|| over the grid, ratio scale
// (n+1)^l.  Functions with closed-form inner-product oracles are measured
// exactly; the rest go through the quadrature rule (which must then satisfy
// the exactness margin of project_function).  The basis must cover the
// largest grid degree.
RateReport run_l2_rate(const OrthoBasis& basis, const BallRule& rule, const TestFunction& f,
                       const std::vector<int>& grid);

// Sobolev residuals ||f - S_n(f)||_{H^r} for 1 <= r <= l, ratio scale
// n^{2r - 1/2 - l}.  When the bound exponent is nonnegative the report
// notes that divergence is permitted.  Shares the error-measurement path
// with run_l2_rate (which is the r = 0 case).
RateReport run_sobolev_rate(const OrthoBasis& basis, const BallRule& rule, const TestFunction& f,
                            int r, const std::vector<int>& grid);

// Decay of the truncation/derivative commutator, measured per axis in the
// base-weight L2 norm through the telescoped two-term form; the reported
// error is the worst axis.  Ratio scale (n+1)^{3/2 - l}.  Both bases must
// cover degree max(grid)+1: the formula reads the degree n+1 block of
// d_j f.  The rule backs functions without closed-form oracles.
RateReport run_commutator_rate(const OrthoBasis& base, const OrthoBasis& raised,
                               const BallRule& rule, const TestFunction& f,
                               const std::vector<int>& grid);

// CSV with header N,error,bound_exponent,ratio — one row per grid point.
void write_csv(const RateReport& report, std::ostream& os);

// The whole report as a single JSON line.
std::string rate_report_json(const RateReport& report);

}  // namespace ballproj
