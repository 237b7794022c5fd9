// Standalone acceptance harness.  Nine numbered criteria, each printing the
// quantities it judged followed by exactly one PASS/FAIL verdict line; the
// process exits 0 only if every criterion passes.  The criteria pin down, at
// fixed tolerances, the properties the library is built around: the identity
// suite over the weight grid, moment/quadrature agreement, the Jacobi
// cross-check, the Markov-constant growth exponent, the three rate
// experiments, polynomial reproduction, and residual scaling with precision.
//
// Everything here is deterministic: fixed seeds, fixed grids, fixed
// precision policy.  Thread count (identity suite only) follows
// BALLPROJ_THREADS, defaulting to the hardware count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "ballproj/experiments.hpp"
#include "ballproj/linalg.hpp"
#include "ballproj/ortho_basis.hpp"
#include "ballproj/scalar.hpp"
#include "ballproj/sobolev.hpp"
#include "ballproj/test_functions.hpp"
#include "ballproj/verify.hpp"

namespace {

using namespace ballproj;
using Clock = std::chrono::steady_clock;

struct CriterionResult {
    int number = 0;
    std::string title;
    bool pass = false;
    std::vector<std::string> details;
};

template <class... Args>
std::string fmt(const char* pattern, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return std::string(buf);
}

int env_threads() {
    if (const char* s = std::getenv("BALLPROJ_THREADS")) {
        const int v = std::atoi(s);
        if (v >= 1) return std::min(v, 64);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Bases and rules shared by several criteria.  The N=41 / N=25 degrees give
// one block of headroom over the default degree grids (the commutator sweep
// reads block max(grid)+1).
struct SharedObjects {
    OrthoBasis d1_base, d1_raised;  // d=1, alpha 0 and 1, degree 41
    OrthoBasis d2_base, d2_raised;  // d=2, alpha 0 and 1, degree 25
    BallRule rule_d1a0, rule_d1a1, rule_d2a0, rule_d2a1;

    static SharedObjects make() {
        PrecisionScope scope(256);
        SharedObjects s{OrthoBasis::build({1, 0.0}, 41, 1e-20, true),
                        OrthoBasis::build({1, 1.0}, 41, 1e-20, true),
                        OrthoBasis::build({2, 0.0}, 25, 1e-20, true),
                        OrthoBasis::build({2, 1.0}, 25, 1e-20, true),
                        build_rule({1, 0.0}, 2 * 41 + 20),
                        build_rule({1, 1.0}, 2 * 41 + 20),
                        build_rule({2, 0.0}, 2 * 25 + 20),
                        build_rule({2, 1.0}, 2 * 25 + 20)};
        return s;
    }
};

// ratios over the top half of the grid must not increase (tiny slack for
// double rounding only)
bool tail_nonincreasing(const std::vector<RatePoint>& pts) {
    if (pts.empty()) return false;
    const std::size_t half = (pts.size() + 1) / 2;
    for (std::size_t i = pts.size() - half; i + 1 < pts.size(); ++i)
        if (pts[i + 1].ratio > pts[i].ratio * (1.0 + 1e-12)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// 1. Identity suite over the full weight grid, with a wall-clock budget.

CriterionResult criterion_identity_suite() {
    CriterionResult c{1, "identity suite over the weight grid", false, {}};
    PrecisionScope scope(256);
    IdentityGrid grid;  // library defaults: d in {1,2,3}, alpha in {-0.5,0,1,2.5},
                        // degrees to 10 (8 in d=3), tolerance 1e-9
    grid.threads = env_threads();
    const auto t0 = Clock::now();
    const std::vector<VerifyReport> reports = run_identity_suite(grid);
    const double secs = seconds_since(t0);

    int failed = 0;
    for (const VerifyReport& r : reports) {
        if (r.pass) continue;
        ++failed;
        c.details.push_back(fmt("failing check: %s d=%d alpha=%g residual=%.3e (tol %.1e)",
                                r.check.c_str(), r.dim, r.alpha, r.residual, r.tolerance));
    }
    c.details.insert(c.details.begin(),
                     fmt("%zu checks (d in {1,2,3}, alpha in {-0.5,0,1,2.5}, degrees to 10, "
                         "d=3 to 8), %d failed, equality tolerance 1e-9",
                         reports.size(), failed));
    c.details.push_back(fmt("runtime %.1f s with %d threads (budget 600 s)", secs, grid.threads));
    c.pass = failed == 0 && secs < 600.0;
    return c;
}

// ---------------------------------------------------------------------------
// 2. Closed-form monomial moments against the quadrature rules.

CriterionResult criterion_moment_quadrature() {
    CriterionResult c{2, "closed-form moments vs quadrature", false, {}};
    PrecisionScope scope(256);
    double worst = 0.0;
    int d_worst = 0;
    double a_worst = 0.0;
    long count = 0;
    for (int d : {1, 2, 3}) {
        for (double alpha : {-0.5, 0.0, 1.0, 2.5}) {
            const WeightParam w{d, alpha};
            const MomentTable table(w);
            const BallRule rule = build_rule(w, 12);
            // odd moments vanish exactly; their comparison is floored at a
            // fixed fraction of the total mass so "relative" stays meaningful
            const real floor_val = table.monomial_moment(MultiIndex::zero(d)) * real(1e-30);
            for (int k = 0; k <= 12; ++k) {
                for (const MultiIndex& gamma : indices_of_order(d, k)) {
                    const real closed = table.monomial_moment(gamma);
                    const real quad = rule.integrate(Polynomial::monomial(gamma));
                    const real denom = std::max(abs(closed), floor_val);
                    const double rel = to_double(abs(closed - quad) / denom);
                    ++count;
                    if (rel > worst) {
                        worst = rel;
                        d_worst = d;
                        a_worst = alpha;
                    }
                }
            }
        }
    }
    c.details.push_back(fmt("%ld monomials, |gamma| <= 12, 12 weight combinations; worst "
                            "relative deviation %.2e (at d=%d, alpha=%g)",
                            count, worst, d_worst, a_worst));
    c.details.push_back("zero moments are compared against a floor of mass * 1e-30");
    c.pass = worst <= 1e-12;
    return c;
}

// ---------------------------------------------------------------------------
// 3. One-dimensional cross-check against normalized Jacobi polynomials.

CriterionResult criterion_jacobi_crosscheck() {
    CriterionResult c{3, "Jacobi cross-check in dimension one", false, {}};
    PrecisionScope scope(256);
    bool ok = true;
    double worst_basis = 0.0, worst_identity = 0.0;
    for (double alpha : {-0.5, 0.0, 1.0, 2.5}) {
        const OrthoBasis basis = OrthoBasis::build({1, alpha}, 20);
        const VerifyReport cross = jacobi_basis_crosscheck(basis, 1e-9);
        ok = ok && cross.pass;
        worst_basis = std::max(worst_basis, cross.residual);
        for (const VerifyReport& r : jacobi_identity_checks(alpha, 20, 1e-10)) {
            ok = ok && r.pass;
            worst_identity = std::max(worst_identity, r.residual);
        }
    }
    c.details.push_back(fmt("basis blocks k <= 20 vs normalized Jacobi polynomials, four "
                            "alphas: worst residual %.2e (tolerance 1e-9)",
                            worst_basis));
    c.details.push_back(fmt("weight-shift and derivative-shift identities, k <= 20: worst "
                            "residual %.2e (tolerance 1e-10; alpha=-1/2, k=0 is the skipped "
                            "degenerate case)",
                            worst_identity));
    c.pass = ok;
    return c;
}

// ---------------------------------------------------------------------------
// 4. Growth exponent of the Markov extremal constant.

CriterionResult criterion_markov_exponent(const SharedObjects& shared) {
    CriterionResult c{4, "Markov constant growth exponent", false, {}};
    PrecisionScope scope(256);
    const double window_lo = 1.8, window_hi = 2.05;

    const OrthoBasis d1a0 = OrthoBasis::build({1, 0.0}, 128, 1e-20, true);
    const OrthoBasis d1a1 = OrthoBasis::build({1, 1.0}, 128, 1e-20, true);

    const real spot = markov_constant(d1a0, 1);
    const double spot_rel = to_double(abs(spot / sqrt(real(3)) - 1));
    bool ok = spot_rel <= 1e-12;
    c.details.push_back(fmt("spot value d=1, alpha=0, n=1: relative deviation from sqrt(3) "
                            "= %.2e (tolerance 1e-12)",
                            spot_rel));

    struct Sweep {
        const OrthoBasis* basis;
        int n_max;
    };
    const Sweep sweeps[] = {{&d1a0, 128}, {&d1a1, 128}, {&shared.d2_base, 24},
                            {&shared.d2_raised, 24}};
    for (const Sweep& s : sweeps) {
        std::vector<double> xs, ys;
        for (int n = 4; n <= s.n_max; ++n) {
            xs.push_back(std::log(static_cast<double>(n)));
            ys.push_back(std::log(to_double(markov_constant(*s.basis, n))));
        }
        const LineFit fit = fit_line(xs, ys);
        // chord over the top quarter shows whether the curve is still rising
        // toward the quadratic law at the end of the sweep
        const std::size_t q = xs.size() - std::max<std::size_t>(2, xs.size() / 4);
        const double local =
            (ys.back() - ys[q]) / (xs.back() - xs[q]);
        const bool inside = fit.slope >= window_lo && fit.slope <= window_hi;
        ok = ok && inside;
        c.details.push_back(fmt("d=%d alpha=%g: slope %.4f over n in {4..%d} %s [%.2f, %.2f]; "
                                "top-quarter chord %.3f",
                                s.basis->weight().dim, s.basis->weight().alpha, fit.slope,
                                s.n_max, inside ? "inside" : "OUTSIDE", window_lo, window_hi,
                                local));
    }
    c.details.push_back(
        "the constant grows like A*n^2 + B*n; the linear term drags any fit anchored at n=4 "
        "below 2, and in d=2 the fit does not reach 1.8 until degrees far past what the "
        "extended-precision basis build can afford");
    c.pass = ok;
    return c;
}

// ---------------------------------------------------------------------------
// 5. Weighted-L2 truncation rate: boundary family and entire function.

CriterionResult criterion_l2_rate(const SharedObjects& shared) {
    CriterionResult c{5, "weighted-L2 truncation rate", false, {}};
    PrecisionScope scope(256);
    const std::vector<int> grid = default_degree_grid(1);

    const RateReport boundary =
        run_l2_rate(shared.d1_base, shared.rule_d1a0, boundary_power(1, 2.5, 0), grid);
    const bool b_shape = boundary.l == 2 && boundary.bound_exponent == -2.0;
    const bool b_tail = tail_nonincreasing(boundary.points) && boundary.compliant;
    c.details.push_back(fmt("boundary family s=2.5, d=1, alpha=0 (regularity l=%d): error x "
                            "(N+1)^2 over the top half of {8..40}: %.3e -> %.3e -> %.3e, "
                            "non-increasing: %s",
                            boundary.l, boundary.points[3].ratio, boundary.points[4].ratio,
                            boundary.points[5].ratio, b_tail ? "yes" : "NO"));

    const RateReport entire =
        run_l2_rate(shared.d1_base, shared.rule_d1a0, entire_exponential(1, {0.8}, 0), grid);
    const bool e_ok = entire.fit_valid && entire.fit.slope < -6.0;
    c.details.push_back(fmt("entire function exp(0.8 x): fitted log-log slope %.1f "
                            "(requirement < -6)",
                            entire.fit.slope));
    c.pass = b_shape && b_tail && e_ok;
    return c;
}

// ---------------------------------------------------------------------------
// 6. Decay of the truncation/differentiation commutator.

CriterionResult criterion_commutator_rate(const SharedObjects& shared) {
    CriterionResult c{6, "commutator decay rate", false, {}};
    PrecisionScope scope(256);
    bool ok = true;
    for (int d : {1, 2}) {
        const OrthoBasis& base = d == 1 ? shared.d1_base : shared.d2_base;
        const OrthoBasis& raised = d == 1 ? shared.d1_raised : shared.d2_raised;
        const BallRule& rule = d == 1 ? shared.rule_d1a0 : shared.rule_d2a0;
        const RateReport rep =
            run_commutator_rate(base, raised, rule, boundary_power(d, 2.5, 3),
                                default_degree_grid(d));
        const bool shape = rep.l == 2 && rep.bound_exponent == -0.5;
        const bool tail = rep.compliant && tail_nonincreasing(rep.points);
        ok = ok && shape && tail;
        c.details.push_back(fmt("d=%d, boundary family s=2.5, alpha=0 -> 1: commutator L2 "
                                "norm x (N+1)^{1/2} bounded over the top half: %s (last "
                                "ratios %.2e, %.2e)",
                                d, tail ? "yes" : "NO", rep.points[rep.points.size() - 2].ratio,
                                rep.points.back().ratio));
    }
    c.pass = ok;
    return c;
}

// ---------------------------------------------------------------------------
// 7. Sobolev residual decay for r = 1, 2 across d in {1,2}, alpha in {0,1}.

CriterionResult criterion_sobolev_rate(const SharedObjects& shared) {
    CriterionResult c{7, "Sobolev residual decay rate", false, {}};
    PrecisionScope scope(256);
    bool ok = true;
    for (int d : {1, 2}) {
        for (double alpha : {0.0, 1.0}) {
            const OrthoBasis& basis = d == 1 ? (alpha == 0.0 ? shared.d1_base : shared.d1_raised)
                                             : (alpha == 0.0 ? shared.d2_base : shared.d2_raised);
            const BallRule& rule = d == 1 ? (alpha == 0.0 ? shared.rule_d1a0 : shared.rule_d1a1)
                                          : (alpha == 0.0 ? shared.rule_d2a0 : shared.rule_d2a1);
            const TestFunction f = boundary_power(d, 2.5, 3);
            const int l_expect = alpha == 0.0 ? 2 : 3;
            for (int r : {1, 2}) {
                const RateReport rep = run_sobolev_rate(basis, rule, f, r, default_degree_grid(d));
                const double e_expect = rate_bound_exponent(l_expect, r);
                const bool shape = rep.l == l_expect && rep.bound_exponent == e_expect;
                ok = ok && shape && rep.compliant;
                c.details.push_back(fmt("d=%d alpha=%g r=%d: l=%d, error x N^{%.1f} bounded "
                                        "over the top half: %s",
                                        d, alpha, r, rep.l, -rep.bound_exponent,
                                        rep.compliant && shape ? "yes" : "NO"));
            }
        }
    }
    c.details.push_back("sharpness is NOT asserted: each check is one-sided (observed decay "
                        "at least as fast as the bound); optimality of the exponents in "
                        "general dimension is left open");
    c.pass = ok;
    return c;
}

// ---------------------------------------------------------------------------
// 8. Exact reproduction of polynomials below the truncation degree.

CriterionResult criterion_polynomial_reproduction() {
    CriterionResult c{8, "polynomial reproduction through H^3", false, {}};
    double worst = 0.0;
    int d_worst = 0;
    double a_worst = 0.0;
    for (int d : {1, 2, 3}) {
        for (double alpha : {-0.5, 0.0, 1.0, 2.5}) {
            PrecisionScope scope(256);
            const OrthoBasis basis = OrthoBasis::build({d, alpha}, 8);
            const MomentTable table(basis.weight());
            DeterministicRng rng(0xba11u + static_cast<std::uint64_t>(d * 101) +
                                 static_cast<std::uint64_t>(static_cast<int>(2 * alpha + 1)));
            for (int trial = 0; trial < 50; ++trial) {
                Polynomial p(d);
                for (int k = 0; k <= 6; ++k)
                    for (int i = 0; i < basis.block_size(k); ++i)
                        p += basis.element(k, i) * real(rng.next_symmetric());
                const Polynomial diff = p - basis.truncate(p, 8);
                const SobolevNormReport np = hnorm_poly(table, p, 3);
                const SobolevNormReport nd = hnorm_poly(table, diff, 3);
                real p_sq(0), d_sq(0);
                for (int r = 0; r <= 3; ++r) {
                    p_sq += np.seminorms[r] * np.seminorms[r];
                    d_sq += nd.seminorms[r] * nd.seminorms[r];
                    const double rel = to_double(sqrt(d_sq) / sqrt(p_sq));
                    if (rel > worst) {
                        worst = rel;
                        d_worst = d;
                        a_worst = alpha;
                    }
                }
            }
        }
    }
    c.details.push_back(fmt("50 random polynomials (degree <= 6, orthonormal-basis "
                            "coefficients in [-1,1]) per combination, truncation at N=8: "
                            "worst relative H^r residual %.2e for r <= 3 (at d=%d, alpha=%g; "
                            "tolerance 1e-9)",
                            worst, d_worst, a_worst));
    c.pass = worst <= 1e-9;
    return c;
}

// ---------------------------------------------------------------------------
// 9. Identity residuals must collapse when the build precision doubles.

CriterionResult criterion_precision_scaling() {
    CriterionResult c{9, "residual scaling with working precision", false, {}};
    PrecisionScope eval(512);  // evaluation precision is fixed; only the
                               // basis build precision changes
    bool ok = true;
    for (int d : {1, 2}) {
        const double alpha = d == 1 ? 0.25 : 0.5;
        const int degree = d == 1 ? 12 : 10;

        // one fixed polynomial with dyadic-rational monomial coefficients,
        // identical across precisions
        DeterministicRng rng(0x5ca1eu + static_cast<std::uint64_t>(d));
        Polynomial u(d);
        for (int k = 0; k <= 8; ++k)
            for (const MultiIndex& gamma : indices_of_order(d, k))
                u += Polynomial::monomial(gamma, real(rng.next_symmetric()));

        const MomentTable table({d, alpha});
        double res[2][4];
        int row = 0;
        for (unsigned bits : {96u, 192u}) {
            const OrthoBasis base = OrthoBasis::build_at_bits({d, alpha}, degree, bits);
            const OrthoBasis raised = OrthoBasis::build_at_bits({d, alpha + 1}, degree, bits);
            res[row][0] = to_double(
                std::max(base.recompute_certificate(), raised.recompute_certificate()));
            res[row][1] = to_double(id_shift_residual(base, raised, u, 6));
            res[row][2] = to_double(table.norm(commutator_direct(base, raised, u, 7, 1) -
                                               commutator_formula(base, raised, u, 7, 1)));
            double eigen = 0.0;
            for (int i = 0; i < base.block_size(5); ++i) {
                const Polynomial e = base.element(5, i);
                eigen = std::max(eigen, to_double(table.norm(
                                            sturm_liouville(e, alpha) -
                                            e * real(5 * (5 + d + 2 * alpha)))));
            }
            res[row][3] = eigen;
            ++row;
        }
        static const char* kNames[4] = {"orthonormality", "weight-shift", "commutator",
                                        "eigenvalue relation"};
        for (int j = 0; j < 4; ++j) {
            const double ratio = res[0][j] / std::max(res[1][j], 1e-60);
            const bool fine = ratio >= 1e3 || (res[0][j] <= 1e-40 && res[1][j] <= 1e-40);
            ok = ok && fine;
            c.details.push_back(fmt("d=%d %s: %.2e -> %.2e at 96 -> 192 build bits "
                                    "(factor %.1e, requirement >= 1e3)",
                                    d, kNames[j], res[0][j], res[1][j], ratio));
        }
    }
    c.pass = ok;
    return c;
}

}  // namespace

int main() {
    const auto t_all = Clock::now();
    std::vector<CriterionResult> results;

    const SharedObjects shared = SharedObjects::make();

    struct Entry {
        int number;
        CriterionResult (*plain)();
        CriterionResult (*with_shared)(const SharedObjects&);
    };
    const Entry entries[] = {
        {1, &criterion_identity_suite, nullptr},
        {2, &criterion_moment_quadrature, nullptr},
        {3, &criterion_jacobi_crosscheck, nullptr},
        {4, nullptr, &criterion_markov_exponent},
        {5, nullptr, &criterion_l2_rate},
        {6, nullptr, &criterion_commutator_rate},
        {7, nullptr, &criterion_sobolev_rate},
        {8, &criterion_polynomial_reproduction, nullptr},
        {9, &criterion_precision_scaling, nullptr},
    };

    int passed = 0;
    for (const Entry& entry : entries) {
        CriterionResult r;
        const auto t0 = Clock::now();
        try {
            r = entry.plain ? entry.plain() : entry.with_shared(shared);
        } catch (const std::exception& ex) {
            r.number = entry.number;
            r.title = "criterion threw";
            r.pass = false;
            r.details.push_back(std::string("exception: ") + ex.what());
        }
        for (const std::string& line : r.details) std::printf("    %s\n", line.c_str());
        std::printf("criterion %d: %s - %s (%.1f s)\n", r.number, r.pass ? "PASS" : "FAIL",
                    r.title.c_str(), seconds_since(t0));
        if (r.pass) ++passed;
        results.push_back(std::move(r));
    }

    std::printf("acceptance: %d/%zu criteria passed (%.1f s total)\n", passed, results.size(),
                seconds_since(t_all));
    return passed == static_cast<int>(results.size()) ? 0 : 1;
}
