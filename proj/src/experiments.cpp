// Rate sweeps.  The error measurements come in two flavors: functions that
// carry closed-form inner-product oracles (the boundary family) are
// measured through exact moment tables, everything else through the
// supplied quadrature rule.  The exact route matters for the deep tails:
// the boundary family's truncation errors sink below the bias any
// realistic rule commits on its fractional-power integrand, and a
// quadrature-floored tail would fake a slope break.

#include "ballproj/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "ballproj/moments.hpp"
#include "ballproj/multi_index.hpp"
#include "ballproj/polynomial.hpp"
#include "ballproj/sobolev.hpp"
#include "json_util.hpp"

namespace ballproj {

namespace {

// tolerated tail jitter in the ratio test; the bounds are asymptotic, so a
// strict comparison would trip on roundoff-level wiggles
constexpr double kRatioSlack = 1.05;
// errors below this count as converged outright and exit the ratio test
constexpr double kErrorFloor = 1e-15;

void check_grid(const std::vector<int>& grid) {
    if (grid.empty()) throw std::invalid_argument("degree grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 1) throw std::invalid_argument("degree grid entries must be >= 1");
        if (i > 0 && grid[i] <= grid[i - 1])
            throw std::invalid_argument("degree grid must be strictly increasing");
    }
}

// Regularity credited to f at this weight.  The entire families tag
// themselves with a huge sentinel ("every order"); cap it so the ratio
// scale stays meaningful, and say so in the report.
int credited_regularity(const TestFunction& f, double alpha, std::vector<std::string>& notes) {
    int l = f.regularity(alpha);
    if (l < 0) throw std::invalid_argument("negative regularity tag");
    if (l > 8) {
        notes.push_back("regularity tag " + std::to_string(l) + " capped at l = 8");
        l = 8;
    }
    return l;
}

std::string join_notes(const std::vector<std::string>& notes) {
    std::string out;
    for (const std::string& n : notes) {
        if (!out.empty()) out += "; ";
        out += n;
    }
    return out;
}

std::string format_alpha(double alpha) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", alpha);
    return buf;
}

// sum_i c_{k,i} e_{k,i} for one block of an expansion
Polynomial block_component(const OrthoBasis& basis, const Expansion& x, int k) {
    Polynomial out(basis.weight().dim);
    if (k < 0 || k >= static_cast<int>(x.coefficients.size())) return out;
    for (int i = 0; i < basis.block_size(k); ++i) {
        const Polynomial e = basis.element(k, i);
        out += e * x.coefficients[k][i];
    }
    return out;
}

// coefficients <f, e_{k,i}> through the function's own closed form
Expansion exact_expansion(const OrthoBasis& basis, const TestFunction& f) {
    const WeightParam& w = basis.weight();
    const MultiIndex zero = MultiIndex::zero(w.dim);
    Expansion x;
    x.weight = w;
    x.coefficients.resize(static_cast<std::size_t>(basis.max_degree()) + 1);
    for (int k = 0; k <= basis.max_degree(); ++k) {
        x.coefficients[k].resize(static_cast<std::size_t>(basis.block_size(k)));
        for (int i = 0; i < basis.block_size(k); ++i) {
            const Polynomial e = basis.element(k, i);
            x.coefficients[k][i] = f.exact_inner(w, zero, e);
        }
    }
    return x;
}

// ||f - S_n(f)||_{H^r} via the expanded quadratic form
//   ||d_g f||^2 - 2 <d_g f, d_g S_n> + <d_g S_n, d_g S_n>
// per derivative, everything exact.  The synthesized truncation is only
// basis-precision close to the true projection, but the form is stationary
// there, so the basis roundoff enters squared.
double exact_residual(const OrthoBasis& basis, const TestFunction& f, const Expansion& x, int n,
                      const std::vector<std::pair<MultiIndex, real>>& norm_terms) {
    const WeightParam& w = basis.weight();
    const MomentTable& table = basis.moments();
    const Polynomial s = basis.synthesize(x, n);
    real total{0};
    for (const auto& [gamma, f_norm2] : norm_terms) {
        const Polynomial ds = partial(s, gamma);
        real term = f_norm2 - 2 * f.exact_inner(w, gamma, ds) + table.inner(ds, ds);
        total += real(multinomial(gamma)) * term;
    }
    if (total < 0) total = 0;  // cancellation roundoff once f is reproduced
    return to_double(sqrt(total));
}

// Monotone-bounded ratio test over the top half of the grid (at least
// three points).  Converged points pass unconditionally.
bool tail_ratio_compliant(const std::vector<RatePoint>& pts) {
    const std::size_t len = pts.size();
    const std::size_t tail = std::min(len, std::max<std::size_t>(3, (len + 1) / 2));
    const std::size_t begin = len - tail;
    for (std::size_t i = begin; i < len; ++i) {
        if (!std::isfinite(pts[i].ratio)) return false;
        if (i > begin && pts[i].error > kErrorFloor &&
            pts[i].ratio > pts[i - 1].ratio * kRatioSlack)
            return false;
    }
    return true;
}

// log-log fit over the largest grid points with positive error
void attach_fit(RateReport& rep, int scale_offset) {
    std::vector<double> xs, ys;
    for (const RatePoint& p : rep.points) {
        if (p.error > 0 && std::isfinite(p.error)) {
            xs.push_back(std::log10(static_cast<double>(p.n + scale_offset)));
            ys.push_back(std::log10(p.error));
        }
    }
    const std::size_t want = std::max<std::size_t>(4, rep.points.size() / 2);
    if (xs.size() > want) {
        xs.erase(xs.begin(), xs.end() - static_cast<std::ptrdiff_t>(want));
        ys.erase(ys.begin(), ys.end() - static_cast<std::ptrdiff_t>(want));
    }
    rep.fit_valid = xs.size() >= 2;
    if (rep.fit_valid) rep.fit = fit_line(xs, ys);
}

void finish_report(RateReport& rep, int scale_offset) {
    for (RatePoint& p : rep.points)
        p.ratio = p.error * std::pow(static_cast<double>(p.n + scale_offset), -rep.bound_exponent);
    rep.compliant = tail_ratio_compliant(rep.points);
    attach_fit(rep, scale_offset);
}

std::string make_id(const char* mode, const TestFunction& f, const WeightParam& w, int r) {
    std::string id = std::string(mode) + ":" + f.name + ":d" + std::to_string(w.dim) + ":a" +
                     format_alpha(w.alpha);
    if (r > 0) id += ":r" + std::to_string(r);
    return id;
}

// shared error sweep behind run_l2_rate (r = 0) and run_sobolev_rate
RateReport projection_rate(const OrthoBasis& basis, const BallRule& rule, const TestFunction& f,
                           int r, const std::vector<int>& grid, int scale_offset,
                           const char* mode) {
    check_grid(grid);
    const WeightParam& w = basis.weight();
    if (f.f.dim != w.dim) throw std::invalid_argument("test function dimension mismatch");
    if (grid.back() > basis.max_degree())
        throw std::invalid_argument("degree grid exceeds the basis degree");
    if (r < 0) throw std::invalid_argument("negative norm order");
    if (f.f.max_order < r)
        throw std::invalid_argument("derivative oracle shallower than the norm order");

    RateReport rep;
    std::vector<std::string> notes;
    rep.weight = w;
    rep.function = f.name;
    rep.r = r;
    rep.l = credited_regularity(f, w.alpha, notes);
    if (r > rep.l) throw std::invalid_argument("norm order exceeds the function's regularity");
    rep.id = make_id(mode, f, w, r);
    rep.bound_exponent = rate_bound_exponent(rep.l, r);
    if (rep.bound_exponent >= 0)
        notes.push_back("bound does not decay (2r >= l + 1/2): divergence permitted");
    notes.push_back("one-sided bound check; sharpness not asserted");

    PrecisionScope guard(std::max(256u, basis.precision_bits()));
    if (f.exact_inner && f.exact_norm_squared) {
        const Expansion x = exact_expansion(basis, f);
        std::vector<std::pair<MultiIndex, real>> norm_terms;
        for (int k = 0; k <= r; ++k)
            for (const MultiIndex& gamma : indices_of_order(w.dim, k))
                norm_terms.emplace_back(gamma, f.exact_norm_squared(w, gamma));
        for (int n : grid)
            rep.points.push_back({n, exact_residual(basis, f, x, n, norm_terms), 0.0});
        notes.push_back("errors via closed-form inner products");
    } else {
        const Integrand values = f.f.slice(MultiIndex::zero(w.dim));
        const Expansion x = project_function(basis, values, rule);
        for (int n : grid) {
            const real err = residual_norms(basis, f.f, rule, x, n, r).at(r);
            rep.points.push_back({n, to_double(err), 0.0});
        }
        notes.push_back("errors via quadrature");
    }
    rep.note = join_notes(notes);
    finish_report(rep, scale_offset);
    return rep;
}

}  // namespace

double rate_bound_exponent(int l, int r) {
    if (r < 0) throw std::invalid_argument("norm order must be nonnegative");
    if (r > l) throw std::invalid_argument("norm order exceeds regularity");
    if (r <= 1) return 1.5 * r - l;
    return 2.0 * r - 0.5 - l;
}

std::vector<int> default_degree_grid(int dim) {
    switch (dim) {
        case 1:
            return {8, 12, 16, 24, 32, 40};
        case 2:
            return {6, 9, 12, 16, 20, 24};
        case 3:
            return {4, 6, 8, 10, 12, 14};
        default:
            throw std::invalid_argument("no default degree grid beyond dimension 3");
    }
}

RateReport run_l2_rate(const OrthoBasis& basis, const BallRule& rule, const TestFunction& f,
                       const std::vector<int>& grid) {
    return projection_rate(basis, rule, f, 0, grid, 1, "l2");
}

RateReport run_sobolev_rate(const OrthoBasis& basis, const BallRule& rule, const TestFunction& f,
                            int r, const std::vector<int>& grid) {
    if (r < 1) throw std::invalid_argument("Sobolev rate needs r >= 1; use run_l2_rate for r = 0");
    return projection_rate(basis, rule, f, r, grid, 0, "sobolev");
}

RateReport run_commutator_rate(const OrthoBasis& base, const OrthoBasis& raised,
                               const BallRule& rule, const TestFunction& f,
                               const std::vector<int>& grid) {
    check_grid(grid);
    require_weight_pair(base, raised);
    const WeightParam& w = base.weight();
    if (f.f.dim != w.dim) throw std::invalid_argument("test function dimension mismatch");
    if (base.max_degree() < grid.back() + 1 || raised.max_degree() < grid.back() + 1)
        throw std::invalid_argument("commutator rate needs bases of degree max(grid)+1");
    if (f.f.max_order < 1) throw std::invalid_argument("commutator rate needs first derivatives");

    RateReport rep;
    std::vector<std::string> notes;
    rep.weight = w;
    rep.function = f.name;
    rep.r = 0;
    rep.l = credited_regularity(f, w.alpha, notes);
    rep.id = make_id("commutator", f, w, 0);
    // the commutator prediction (3/2 - l) matches the r = 1 envelope but is
    // valid down to l = 0, where the envelope formula would reject r > l
    rep.bound_exponent = 1.5 - rep.l;
    notes.push_back("error is the worst axis of the telescoped commutator, base-weight L2 norm");
    notes.push_back("one-sided bound check; sharpness not asserted");

    PrecisionScope guard(
        std::max(256u, std::max(base.precision_bits(), raised.precision_bits())));
    const bool exact = static_cast<bool>(f.exact_inner);
    const MomentTable& table = base.moments();

    // per axis: the base-weight expansion blocks of d_j f we will need
    std::vector<Expansion> dxf;
    if (!exact) {
        for (int j = 1; j <= w.dim; ++j)
            dxf.push_back(project_function(base, f.f.slice(MultiIndex::unit(w.dim, j)), rule));
    }
    for (int n : grid) {
        double worst = 0.0;
        for (int j = 1; j <= w.dim; ++j) {
            Polynomial high(w.dim), low(w.dim);
            if (exact) {
                const MultiIndex gamma = MultiIndex::unit(w.dim, j);
                for (int k : {n + 1, n}) {
                    Polynomial block(w.dim);
                    for (int i = 0; i < base.block_size(k); ++i) {
                        const Polynomial e = base.element(k, i);
                        block += e * f.exact_inner(w, gamma, e);
                    }
                    (k == n + 1 ? high : low) = block;
                }
            } else {
                high = block_component(base, dxf[static_cast<std::size_t>(j - 1)], n + 1);
                low = block_component(base, dxf[static_cast<std::size_t>(j - 1)], n);
            }
            const Polynomial diff =
                raised.project_component(high, n - 1) - raised.project_component(low, n);
            worst = std::max(worst, to_double(sqrt(table.inner(diff, diff))));
        }
        rep.points.push_back({n, worst, 0.0});
    }
    notes.push_back(exact ? "errors via closed-form inner products" : "errors via quadrature");
    rep.note = join_notes(notes);
    finish_report(rep, 1);
    return rep;
}

void write_csv(const RateReport& report, std::ostream& os) {
    os << "N,error,bound_exponent,ratio\n";
    for (const RatePoint& p : report.points)
        os << p.n << ',' << detail::json_number(p.error) << ','
           << detail::json_number(report.bound_exponent) << ',' << detail::json_number(p.ratio)
           << '\n';
}

std::string rate_report_json(const RateReport& report) {
    using detail::json_escape;
    using detail::json_number;
    std::string s = "{\"id\":\"" + json_escape(report.id) + "\"";
    s += ",\"d\":" + std::to_string(report.weight.dim);
    s += ",\"alpha\":" + json_number(report.weight.alpha);
    s += ",\"function\":\"" + json_escape(report.function) + "\"";
    s += ",\"r\":" + std::to_string(report.r);
    s += ",\"l\":" + std::to_string(report.l);
    s += ",\"bound_exponent\":" + json_number(report.bound_exponent);
    s += ",\"compliant\":" + std::string(report.compliant ? "true" : "false");
    s += ",\"fit_valid\":" + std::string(report.fit_valid ? "true" : "false");
    s += ",\"slope\":" + json_number(report.fit.slope);
    s += ",\"fit_residual\":" + json_number(report.fit.rms_residual);
    s += ",\"points\":[";
    for (std::size_t i = 0; i < report.points.size(); ++i) {
        const RatePoint& p = report.points[i];
        if (i > 0) s += ",";
        s += "{\"n\":" + std::to_string(p.n) + ",\"error\":" + json_number(p.error) +
             ",\"ratio\":" + json_number(p.ratio) + "}";
    }
    s += "],\"note\":\"" + json_escape(report.note) + "\"}";
    return s;
}

}  // namespace ballproj
