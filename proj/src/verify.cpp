#include "ballproj/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <future>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

#include "ballproj/linalg.hpp"
#include "ballproj/multi_index.hpp"
#include "json_util.hpp"

namespace ballproj {

namespace {

// Fixed check order; the basis-failure path emits the same list so a suite
// always yields 17 reports per grid point.
constexpr const char* kCheckNames[] = {
    "orthonormality",
    "parity",
    "weak-eigenvalue",
    "omega-block-support",
    "raised-block-split",
    "projector-shift-collapse",
    "projector-shift-identity",
    "raising-degree",
    "raising-adjoint",
    "raising-block-map",
    "derivative-block-map",
    "derivative-projection-commute",
    "block-norm-shift",
    "offset-projector-derivative",
    "commutator-telescoping",
    "tail-bound-low",
    "tail-bound-high",
};
constexpr int kCheckCount = static_cast<int>(sizeof(kCheckNames) / sizeof(kCheckNames[0]));

bool is_inequality_check(const char* name) { return std::strncmp(name, "tail-", 5) == 0; }

// Tracks the worst residual and where it occurred.  NaN counts as worst.
struct Worst {
    double value = 0.0;
    int degree = -1;
    void feed(double v, int k) {
        if (!(v <= value)) {
            value = v;
            degree = k;
        }
    }
};

VerifyReport make_report(const char* check, int d, double alpha, const Worst& w, double tol,
                         std::string note = {}) {
    VerifyReport r;
    r.check = check;
    r.dim = d;
    r.alpha = alpha;
    r.degree = w.degree;
    r.residual = w.value;
    r.tolerance = tol;
    r.pass = std::isfinite(w.value) && w.value <= tol;
    r.note = std::move(note);
    return r;
}

// Unit alpha-norm combination of the block-k elements (coefficients uniform
// on [-1,1], then normalized; exact up to the orthonormality certificate).
Polynomial random_block_combo(const OrthoBasis& b, int k, DeterministicRng& rng) {
    const int m = b.block_size(k);
    std::vector<real> c(static_cast<std::size_t>(m));
    real s2(0);
    for (auto& ci : c) {
        ci = real(rng.next_symmetric());
        s2 += ci * ci;
    }
    if (!(to_double(s2) > 0)) {
        c[0] = real(1);
        s2 = real(1);
    }
    const real inv = real(1) / sqrt(s2);
    Polynomial acc(b.weight().dim);
    for (int i = 0; i < m; ++i) acc += b.element(k, i) * (c[i] * inv);
    return acc;
}

// Random polynomial of degree <= deg with orthonormal coefficients uniform
// on [-1,1]; alpha-norm is at most sqrt(dim Pi_deg).
Polynomial random_poly(const OrthoBasis& b, int deg, DeterministicRng& rng) {
    Polynomial acc(b.weight().dim);
    for (int k = 0; k <= deg; ++k)
        for (int i = 0; i < b.block_size(k); ++i)
            acc += b.element(k, i) * real(rng.next_symmetric());
    return acc;
}

// Sum of squared expansion coefficients outside the allowed blocks.
double stray_mass(const Expansion& x, std::initializer_list<int> allowed) {
    real bad(0);
    for (int m = 0; m < static_cast<int>(x.coefficients.size()); ++m) {
        if (std::find(allowed.begin(), allowed.end(), m) != allowed.end()) continue;
        for (const real& c : x.coefficients[static_cast<std::size_t>(m)]) bad += c * c;
    }
    return std::sqrt(std::max(0.0, to_double(bad)));
}

double coeff_inf_norm(const Polynomial& p) {
    double m = 0.0;
    for (const auto& [gamma, c] : p.terms()) m = std::max(m, std::abs(to_double(c)));
    return m;
}

std::uint64_t grid_point_seed(std::uint64_t seed, int d, double alpha) {
    std::uint64_t abits = 0;
    std::memcpy(&abits, &alpha, sizeof abits);
    std::uint64_t mix = seed;
    mix ^= 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(d + 1);
    mix ^= abits + 0x632be59bd9b4e019ULL + (mix << 6) + (mix >> 2);
    return mix;
}

std::vector<VerifyReport> failed_grid_point(int d, double alpha, const IdentityGrid& g,
                                            const std::string& why) {
    std::vector<VerifyReport> out;
    out.reserve(kCheckCount);
    for (const char* name : kCheckNames) {
        Worst w;
        w.feed(std::numeric_limits<double>::infinity(), -1);
        out.push_back(make_report(name, d, alpha, w,
                                  is_inequality_check(name) ? g.inequality_slack : g.tolerance,
                                  "basis build failed: " + why));
    }
    return out;
}

std::vector<VerifyReport> run_grid_point(int d, double alpha, const IdentityGrid& g) {
    const int kmax = (d >= 3) ? g.max_degree_d3 : g.max_degree;
    const int n_basis = kmax + 2;  // headroom: every identity below stays within range

    std::optional<OrthoBasis> base_opt, raised_opt;
    try {
        base_opt = OrthoBasis::build({d, alpha}, n_basis);
        raised_opt = OrthoBasis::build({d, alpha + 1.0}, n_basis);
    } catch (const std::exception& e) {
        return failed_grid_point(d, alpha, g, e.what());
    }
    const OrthoBasis& base = *base_opt;
    const OrthoBasis& raised = *raised_opt;

    PrecisionScope scope(std::max(base.precision_bits(), raised.precision_bits()));
    DeterministicRng rng(grid_point_seed(g.seed, d, alpha));
    const MomentTable& low = base.moments();      // weight alpha
    const MomentTable& high = raised.moments();   // weight alpha + 1
    const int reps = (d >= 3) ? 2 : 3;

    std::vector<VerifyReport> out;
    out.reserve(kCheckCount);
    int ci = 0;

    // orthonormality: re-derived certificates plus spot checks through the
    // raw moment table (an independent path around the stored Gram products)
    {
        Worst w;
        w.feed(to_double(base.recompute_certificate()), -1);
        w.feed(to_double(raised.recompute_certificate()), -1);
        for (int s = 0; s < 16; ++s) {
            const OrthoBasis& b = (s % 2 == 0) ? base : raised;
            const int k1 = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_basis + 1)));
            const int k2 = (s % 4 < 2) ? k1 : std::min(k1 + 2, n_basis);
            const int i1 = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(b.block_size(k1))));
            const int i2 = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(b.block_size(k2))));
            const real ip = b.moments().inner(b.element(k1, i1), b.element(k2, i2));
            const real want = (k1 == k2 && i1 == i2) ? real(1) : real(0);
            w.feed(to_double(abs(ip - want)), std::max(k1, k2));
        }
        out.push_back(make_report(kCheckNames[ci++], d, alpha, w, g.tolerance));
    }

    // parity: block-k elements carry only monomials of degree = k mod 2, so
    // e(-x) = (-1)^k e(x); any off-parity term is reported at full size
    {
        Worst w;
        for (const OrthoBasis* b : {&base, &raised})
            for (int k = 0; k <= n_basis; ++k)
                for (int i = 0; i < b->block_size(k); ++i) {
                    const Polynomial e = b->element(k, i);
                    double bad = 0.0;
                    for (const auto& [gamma, c] : e.terms())
                        if ((gamma.order() + k) % 2 != 0)
                            bad = std::max(bad, std::abs(to_double(c)));
                    w.feed(bad, k);
                }
        out.push_back(make_report(kCheckNames[ci++], d, alpha, w, g.tolerance));
    }

    // weak eigenvalue relation: for p in block k and any polynomial q,
    // <grad p, grad q>_{a+1} + sum_{i<j} <D_ij p, D_ij q>_a = k(k+d+2a) <p,q>_a
    {
        Worst w;
        for (int k = 0; k <= kmax; ++k)
            for (int t = 0; t < reps; ++t) {
                const Polynomial p = random_block_combo(base, k, rng);
                const Polynomial q = random_poly(base, kmax, rng);
                const auto gp = gradient(p);
                const auto gq = gradient(q);
                real lhs(0);
                for (int j = 0; j < d; ++j) lhs += high.inner(gp[static_cast<std::size_t>(j)],
                                                              gq[static_cast<std::size_t>(j)]);
                for (int i = 1; i <= d; ++i)
                    for (int j = i + 1; j <= d; ++j)
                        lhs += low.inner(angular_derivative(p, i, j), angular_derivative(q, i, j));
                const real lam = real(k) * (real(k + d) + real(2.0 * alpha));
                const real rhs = lam * low.inner(p, q);
                const double scale = 1.0 + to_double(abs(rhs)) + to_double(lam);
                w.feed(to_double(abs(lhs - rhs)) / scale, k);
            }
        out.push_back(make_report(kCheckNames[ci++], d, alpha, w, g.tolerance));
    }

    // omega-block-support: (1-|x|^2) times a block-k element of the raised
    // weight expands over base blocks k and k+2 only
    {
        Worst w;
        for (int k = 0; k <= kmax; ++k) {
            const Polynomial p = random_block_combo(raised, k, rng);
            const Expansion x = base.expand(multiply_omega(p));
            const double scale = 1.0 + std::sqrt(std::max(0.0, to_double(x.norm_squared())));
            w.feed(stray_mass(x, {k, k + 2}) / scale, k);
        }
        out.push_back(make_report(kCheckNames[ci++], d, alpha, w, g.tolerance));
    }

    // raised-block-split: a base block-k element is the sum of its raised
    // projections onto blocks k-2 and k
    {
        Worst w;
        for (int k = 0; k <= kmax; ++k) {
            const Polynomial q = random_block_combo(base, k, rng);
            const Polynomial r =
                raised.project_component(q, k - 2) + raised.project_component(q, k);
            w.feed(to_double(low.norm(q - r)), k);
        }
        out.push_back(make_report(kCheckNames[ci++], d, alpha, w, g.tolerance));
    }

    // projector-shift-collapse: the raised projector only sees the two base
    // components it can couple to
    {
        Worst w;
        for (int t = 0; t < reps; ++t) {
            const Polynomial u = random_poly(base, kmax, rng);
            const double scale = 1.0 + to_double(low.norm(u));
            for (int k = 0; k <= kmax; ++k) {
                const Polynomial lhs = raised.project_component(u, k);
                const Polynomial rhs = raised.project_component(
                    base.project_component(u, k) + base.project_component(u, k + 2), k);
                w.feed(to_double(high.norm(lhs - rhs)) / scale, k);
            }
        }
        out.push_back(make_report(kCheckNames[ci++], d, alpha, w, g.tolerance));
    }

    // projector-shift-identity: the four-term rearrangement of the raised
    // projector in terms of base projections
    {
        Worst w;
        for (int t = 0; t < reps; ++t) {
            const Polynomial u = random_poly(base, kmax, rng);
            const double scale = 1.0 + to_double(low.norm(u));
            for (int k = 0; k <= kmax; ++k)
                w.feed(to_double(id_shift_residual(base, raised, u, k)) / scale, k);
        }
        out.push_back(make_report(kCheckNames[ci++], d, alpha, w, g.tolerance));
    }

    // raising-degree: the raising operator maps degree <= k into degree <= k+1
    {
        Worst w;
        for (int k = 0; k <= kmax; ++k) {
            const Polynomial p = random_poly(raised, k, rng);
            const int j = 1 + k % d;
            const Polynomial v = raise(p, alpha, j);
            w.feed(std::max(0.0, static_cast<double>(v.degree() - (k + 1))), k);
        }
        out.push_back(make_report(kCheckNames[ci++], d, alpha, w, g.tolerance));
    }

    // raising-adjoint: <d_j p, q>_{a+1} = <p, raise_j q>_a for polynomials
    {
        Worst w;
        for (int t = 0; t < reps; ++t) {
            const Polynomial p = random_poly(base, kmax, rng);
            const Polynomial q = random_poly(base, kmax, rng);
            for (int j = 1; j <= d; ++j) {
                const real lhs = high.inner(partial(p, j), q);
                const real rhs = low.inner(p, raise(q, alpha, j));
                w.feed(to_double(abs(lhs - rhs)) / (1.0 + to_double(abs(lhs))), -1);
            }
        }
        out.push_back(make_report(kCheckNames[ci++], d, alpha, w, g.tolerance));
    }

    // raising-block-map: raise_j sends a raised block-k element into base
    // block k+1
    {
        Worst w;
        for (int k = 0; k <= kmax; ++k) {
            const Polynomial p = random_block_combo(raised, k, rng);
            const int j = 1 + k % d;
            const Expansion x = base.expand(raise(p, alpha, j));
            const double scale = 1.0 + std::sqrt(std::max(0.0, to_double(x.norm_squared())));
            w.feed(stray_mass(x, {k + 1}) / scale, k);
        }
        out.push_back(make_report(kCheckNames[ci++], d, alpha, w, g.tolerance));
    }

    // derivative-block-map: d_j sends a base block-k element into raised
    // block k-1
    {
        Worst w;
        for (int k = 0; k <= kmax; ++k) {
            const Polynomial p = random_block_combo(base, k, rng);
            const int j = 1 + k % d;
            const Expansion x = raised.expand(partial(p, j));
            const double scale = 1.0 + std::sqrt(std::max(0.0, to_double(x.norm_squared())));
            w.feed(stray_mass(x, {k - 1}) / scale, k);
        }
        out.push_back(make_report(kCheckNames[ci++], d, alpha, w, g.tolerance));
    }

    // derivative-projection-commute: d_j proj_k = raised proj_{k-1} d_j
    {
        Worst w;
        for (int t = 0; t < reps; ++t) {
            const Polynomial u = random_poly(base, kmax, rng);
            const double scale = 1.0 + to_double(low.norm(u));
            for (int k = 0; k <= kmax; ++k) {
                const int j = 1 + (k + t) % d;
                const Polynomial lhs = partial(base.project_component(u, k), j);
                const Polynomial rhs = raised.project_component(partial(u, j), k - 1);
                w.feed(to_double(high.norm(lhs - rhs)) / scale, k);
            }
        }
        out.push_back(make_report(kCheckNames[ci++], d, alpha, w, g.tolerance));
    }

    // block-norm-shift: on a raised block k the two weights are proportional:
    // <p,q>_a = ((k + d/2)/(a+1) + 1) <p,q>_{a+1}
    {
        Worst w;
        for (int k = 0; k <= kmax; ++k) {
            const Polynomial p = random_block_combo(raised, k, rng);
            const Polynomial q = random_block_combo(raised, k, rng);
            const real factor = (real(k) + real(d) / 2) / (real(alpha) + 1) + 1;
            const real lhs = low.inner(p, q);
            const real rhs = factor * high.inner(p, q);
            w.feed(to_double(abs(lhs - rhs)) / (1.0 + to_double(abs(lhs))), k);
        }
        out.push_back(make_report(kCheckNames[ci++], d, alpha, w, g.tolerance));
    }

    // offset-projector-derivative: d_j proj_{k+1} u - proj_k d_j u written
    // through the raised projectors of the neighboring components
    {
        Worst w;
        for (int t = 0; t < reps; ++t) {
            const Polynomial u = random_poly(base, kmax, rng);
            const double scale = 1.0 + to_double(low.norm(u));
            for (int k = 0; k <= kmax; ++k) {
                const int j = 1 + (k + t) % d;
                const Polynomial du = partial(u, j);
                const Polynomial lhs =
                    partial(base.project_component(u, k + 1), j) - base.project_component(du, k);
                const Polynomial rhs =
                    raised.project_component(base.project_component(du, k + 2), k) -
                    raised.project_component(base.project_component(du, k), k - 2);
                w.feed(to_double(low.norm(lhs - rhs)) / scale, k);
            }
        }
        out.push_back(make_report(kCheckNames[ci++], d, alpha, w, g.tolerance));
    }

    // commutator-telescoping: the literal truncation commutator equals its
    // two-term telescoped form
    {
        Worst w;
        for (int t = 0; t < reps; ++t) {
            const Polynomial u = random_poly(base, kmax, rng);
            const double scale = 1.0 + to_double(low.norm(u));
            for (int n = 0; n <= kmax; ++n) {
                const int j = 1 + (n + t) % d;
                const Polynomial diff = commutator_direct(base, raised, u, n, j) -
                                        commutator_formula(base, raised, u, n, j);
                w.feed(to_double(low.norm(diff)) / scale, n);
            }
        }
        out.push_back(make_report(kCheckNames[ci++], d, alpha, w, g.tolerance));
    }

    // tail bounds: for q in base block n+1 (resp. n), the alpha-norm of the
    // raised projection onto block n-1 (resp. n) is controlled by
    // (n + d/2 + a)/(a + 1) (resp. (n + 1 + d/2 + a)/(a + 1)) times ||q||_a^2.
    // Checked as absolute excess over `samples` random unit-norm elements.
    {
        Worst w_low, w_high;
        for (int t = 0; t < g.samples; ++t) {
            const int n = static_cast<int>(t % (kmax + 1));
            if (n >= 1) {
                const Polynomial q = random_block_combo(base, n + 1, rng);
                const Polynomial lo = raised.project_component(q, n - 1);
                const real bound =
                    (real(n) + real(d) / 2 + real(alpha)) / (real(alpha) + 1) * low.inner(q, q);
                w_low.feed(std::max(0.0, to_double(low.inner(lo, lo) - bound)), n);
            }
            const Polynomial q = random_block_combo(base, n, rng);
            const Polynomial pr = raised.project_component(q, n);
            const real bound = (real(n) + 1 + real(d) / 2 + real(alpha)) / (real(alpha) + 1) *
                               low.inner(q, q);
            w_high.feed(std::max(0.0, to_double(low.inner(pr, pr) - bound)), n);
        }
        out.push_back(make_report(kCheckNames[ci++], d, alpha, w_low, g.inequality_slack,
                                  "absolute excess over random unit-norm block elements"));
        out.push_back(make_report(kCheckNames[ci++], d, alpha, w_high, g.inequality_slack,
                                  "absolute excess over random unit-norm block elements"));
    }

    return out;
}

}  // namespace

std::string to_json_line(const VerifyReport& r) {
    using detail::json_escape;
    using detail::json_number;
    std::string s = "{\"check\":\"" + json_escape(r.check) + "\"";
    s += ",\"dim\":" + std::to_string(r.dim);
    s += ",\"alpha\":" + json_number(r.alpha);
    s += ",\"degree\":" + std::to_string(r.degree);
    s += ",\"residual\":" + json_number(r.residual);
    s += ",\"tolerance\":" + json_number(r.tolerance);
    s += std::string(",\"pass\":") + (r.pass ? "true" : "false");
    s += ",\"note\":\"" + json_escape(r.note) + "\"}";
    return s;
}

bool all_pass(const std::vector<VerifyReport>& reports) {
    return std::all_of(reports.begin(), reports.end(),
                       [](const VerifyReport& r) { return r.pass; });
}

std::vector<VerifyReport> run_identity_suite(const IdentityGrid& grid) {
    if (grid.dims.empty() || grid.alphas.empty())
        throw std::invalid_argument("identity suite: empty grid");
    if (grid.max_degree < 1 || grid.max_degree_d3 < 1)
        throw std::invalid_argument("identity suite: max_degree must be >= 1");
    if (grid.samples < 1) throw std::invalid_argument("identity suite: samples must be >= 1");
    for (int d : grid.dims)
        if (d < 1) throw std::invalid_argument("identity suite: dimensions must be >= 1");

    struct Point {
        int d;
        double alpha;
    };
    std::vector<Point> pts;
    for (int d : grid.dims)
        for (double a : grid.alphas) pts.push_back({d, a});

    std::vector<std::vector<VerifyReport>> per(pts.size());
    const int want = std::min<int>(std::max(1, grid.threads), static_cast<int>(pts.size()));
    if (want <= 1) {
        for (std::size_t i = 0; i < pts.size(); ++i)
            per[i] = run_grid_point(pts[i].d, pts[i].alpha, grid);
    } else {
        // Boost's working precision is thread-local, so grid points can run
        // concurrently as long as each builds its own tables (they do).
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= pts.size()) break;
                per[i] = run_grid_point(pts[i].d, pts[i].alpha, grid);
            }
        };
        std::vector<std::future<void>> futures;
        futures.reserve(static_cast<std::size_t>(want));
        for (int t = 0; t < want; ++t) futures.push_back(std::async(std::launch::async, worker));
        for (auto& f : futures) f.get();
    }

    std::vector<VerifyReport> out;
    out.reserve(pts.size() * kCheckCount);
    for (auto& v : per)
        for (auto& r : v) out.push_back(std::move(r));
    return out;
}

Polynomial jacobi_reference(double alpha, int k) {
    if (alpha <= -1.0) throw std::invalid_argument("jacobi_reference: requires alpha > -1");
    if (k < 0) throw std::invalid_argument("jacobi_reference: degree must be >= 0");
    const MultiIndex x1 = MultiIndex::unit(1, 1);
    Polynomial prev = Polynomial::constant(1, real(1));
    if (k == 0) return prev;
    const real a(alpha);
    Polynomial cur = Polynomial::monomial(x1, a + 1);
    for (int n = 2; n <= k; ++n) {
        // (2n+2a-1)(2n+2a)(2n+2a-2) x P_{n-1} - 2(n+a-1)^2 (2n+2a) P_{n-2},
        // divided by 2n(n+2a)(2n+2a-2)
        const real t = 2 * a + 2 * n;
        const real c1 = (t - 1) * t * (t - 2);
        const real c2 = 2 * (a + (n - 1)) * (a + (n - 1)) * t;
        const real den = 2 * n * (a + n + a) * (t - 2);
        Polynomial next = cur.shifted(x1) * (c1 / den) - prev * (c2 / den);
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

std::vector<VerifyReport> jacobi_identity_checks(double alpha, int k_max, double tolerance) {
    if (alpha <= -1.0) throw std::invalid_argument("jacobi checks: requires alpha > -1");
    if (k_max < 1) throw std::invalid_argument("jacobi checks: k_max must be >= 1");
    PrecisionScope scope(std::max(current_precision_bits(), 256u));
    const real a(alpha);

    std::vector<Polynomial> p_a, p_a1;
    for (int k = 0; k <= k_max; ++k) {
        p_a.push_back(jacobi_reference(alpha, k));
        p_a1.push_back(jacobi_reference(alpha + 1.0, k));
    }

    std::vector<VerifyReport> out;

    // derivative shift: P_k' = ((k + 2a + 1)/2) P_{k-1} at the raised weight
    {
        Worst w;
        for (int k = 1; k <= k_max; ++k) {
            const real c = (a + a + (k + 1)) / 2;
            const Polynomial diff = partial(p_a[static_cast<std::size_t>(k)], 1) -
                                    p_a1[static_cast<std::size_t>(k - 1)] * c;
            const double scale =
                1.0 + std::abs(to_double(c)) * coeff_inf_norm(p_a1[static_cast<std::size_t>(k - 1)]);
            w.feed(coeff_inf_norm(diff) / scale, k);
        }
        out.push_back(make_report("jacobi-derivative-shift", 1, alpha, w, tolerance));
    }

    // weight shift: P_k at weight a as a two-term combination at weight a+1;
    // the k = 0 case degenerates at a = -1/2 (vanishing denominator)
    {
        Worst w;
        std::string note;
        for (int k = 0; k <= k_max; ++k) {
            if (k == 0 && std::abs(2.0 * alpha + 1.0) < 1e-12) {
                note = "k = 0 skipped at alpha = -1/2 (degenerate denominator)";
                continue;
            }
            const real c_same = ((a + a + (k + 1)) * (a + a + (k + 2))) /
                                ((a + a + (2 * k + 1)) * (a + a + (2 * k + 2)));
            const real c_down = (a + k) / (2 * (a + a + (2 * k + 1)));
            Polynomial rhs = p_a1[static_cast<std::size_t>(k)] * c_same;
            if (k >= 2) rhs -= p_a1[static_cast<std::size_t>(k - 2)] * c_down;
            const Polynomial diff = p_a[static_cast<std::size_t>(k)] - rhs;
            w.feed(coeff_inf_norm(diff) / (1.0 + coeff_inf_norm(rhs)), k);
        }
        out.push_back(make_report("jacobi-weight-shift", 1, alpha, w, tolerance, note));
    }

    return out;
}

VerifyReport jacobi_basis_crosscheck(const OrthoBasis& basis, double tolerance) {
    if (basis.weight().dim != 1)
        throw std::invalid_argument("jacobi crosscheck: needs a one-dimensional basis");
    PrecisionScope scope(basis.precision_bits());
    const double alpha = basis.weight().alpha;
    Worst w;
    for (int k = 0; k <= basis.max_degree(); ++k) {
        const Polynomial e = basis.element(k, 0);
        Polynomial p = jacobi_reference(alpha, k);
        p *= real(1) / basis.moments().norm(p);
        const double r = std::min(to_double(basis.moments().norm(e - p)),
                                  to_double(basis.moments().norm(e + p)));
        w.feed(r, k);
    }
    return make_report("jacobi-basis-crosscheck", 1, alpha, w, tolerance,
                       "basis blocks against normalized Jacobi polynomials, up to sign");
}

real markov_constant(const OrthoBasis& basis, int n) {
    if (n < 0 || n > basis.max_degree())
        throw std::invalid_argument("markov_constant: degree outside the basis range");
    if (n == 0) return real(0);
    PrecisionScope scope(basis.precision_bits());
    const int d = basis.weight().dim;
    const MomentTable& table = basis.moments();

    real best(0);
    for (int par = 0; par <= 1 && par <= n; ++par) {
        std::vector<Polynomial> elems;
        for (int k = par; k <= n; k += 2)
            for (int i = 0; i < basis.block_size(k); ++i) elems.push_back(basis.element(k, i));

        // gradients land in the opposite parity class, degrees <= n-1
        std::vector<MultiIndex> monos;
        for (int m = (par + 1) % 2; m <= n - 1; m += 2)
            for (const auto& gamma : indices_of_order(d, m)) monos.push_back(gamma);
        if (monos.empty()) continue;  // constants only: zero gradient

        std::map<MultiIndex, std::size_t, GradedLexLess> pos;
        for (std::size_t i = 0; i < monos.size(); ++i) pos[monos[i]] = i;
        const std::size_t ne = elems.size();
        const std::size_t nm = monos.size();
        const Matrix gram = table.gram_block(monos);

        // G = sum_axes C^T M C with C the derivative coefficients in the
        // monomial list; the basis is orthonormal, so ||p||^2 = |c|^2 and the
        // extremal ratio is the top eigenvalue of G.
        Matrix g_mat(ne, ne);
        for (int axis = 1; axis <= d; ++axis) {
            Matrix c_rows(ne, nm);
            for (std::size_t e = 0; e < ne; ++e) {
                const Polynomial dp = partial(elems[e], axis);
                for (const auto& [gamma, c] : dp.terms()) c_rows(e, pos.at(gamma)) = c;
            }
            Matrix t_rows(ne, nm);
            for (std::size_t e = 0; e < ne; ++e) {
                const auto mv = matvec(gram, c_rows.row(e));
                for (std::size_t m = 0; m < nm; ++m) t_rows(e, m) = mv[m];
            }
            for (std::size_t e = 0; e < ne; ++e)
                for (std::size_t f = 0; f <= e; ++f) g_mat(e, f) += dot(c_rows.row(e), t_rows.row(f));
        }
        for (std::size_t e = 0; e < ne; ++e)
            for (std::size_t f = 0; f < e; ++f) g_mat(f, e) = g_mat(e, f);

        const real lam = symmetric_largest_eigenvalue(g_mat);
        if (lam > best) best = lam;
    }
    return best > 0 ? real(sqrt(best)) : real(0);
}

}  // namespace ballproj
