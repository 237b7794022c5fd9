#include "ballproj/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "ballproj/linalg.hpp"
#include "ballproj/multi_index.hpp"

namespace ballproj {

void gauss_jacobi_01(double p, double q, int m, std::vector<real>& nodes, std::vector<real>& weights) {
    if (!(p > -1.0) || !(q > -1.0)) throw std::invalid_argument("gauss_jacobi_01: exponents must be > -1");
    if (m < 1) throw std::invalid_argument("gauss_jacobi_01: need at least one node");

    // Recurrence coefficients of the Jacobi weight (1-u)^a (1+u)^b on (-1,1);
    // the map u = 2t - 1 carries the rule to (0,1) afterwards.
    const real a(p), b(q);
    const int n = m;
    std::vector<real> diag(static_cast<std::size_t>(n));
    std::vector<real> off(static_cast<std::size_t>(n), real(0));

    diag[0] = (b - a) / (a + b + 2);
    for (int k = 1; k < n; ++k) {
        const real s = 2 * real(k) + a + b;
        diag[static_cast<std::size_t>(k)] = (b * b - a * a) / (s * (s + 2));
    }
    std::vector<real> beta(static_cast<std::size_t>(n), real(0));
    if (n > 1) {
        // k = 1 uses the cancelled form: the generic one is 0/0 when a+b = 0.
        beta[1] = 4 * (a + 1) * (b + 1) / ((a + b + 2) * (a + b + 2) * (a + b + 3));
        off[1] = sqrt(beta[1]);
    }
    for (int k = 2; k < n; ++k) {
        const real s = 2 * real(k) + a + b;
        beta[static_cast<std::size_t>(k)] =
            4 * real(k) * (real(k) + a) * (real(k) + b) * (real(k) + a + b) /
            (s * s * (s + 1) * (s - 1));
        off[static_cast<std::size_t>(k)] = sqrt(beta[static_cast<std::size_t>(k)]);
    }

    // total mass 2^{a+b+1} B(a+1, b+1)
    const real mu0 = exp(lgamma(real(a + 1)) + lgamma(real(b + 1)) - lgamma(real(a + b + 2)) +
                         (a + b + 1) * log(real(2)));

    std::vector<real> u = tridiagonal_eigenvalues(diag, off);

    nodes.assign(static_cast<std::size_t>(n), real(0));
    weights.assign(static_cast<std::size_t>(n), real(0));
    const real inv_sqrt_mu0 = 1 / sqrt(mu0);
    for (int i = 0; i < n; ++i) {
        // Christoffel number: 1 / sum_k ptilde_k(u_i)^2 over the orthonormal
        // family, evaluated by the three-term recurrence.
        real pm1(0), pk = inv_sqrt_mu0;
        real ssq = pk * pk;
        for (int k = 0; k + 1 < n; ++k) {
            real pk1 = (u[static_cast<std::size_t>(i)] - diag[static_cast<std::size_t>(k)]) * pk;
            if (k > 0) pk1 -= off[static_cast<std::size_t>(k)] * pm1;
            pk1 /= off[static_cast<std::size_t>(k + 1)];
            pm1 = pk;
            pk = pk1;
            ssq += pk * pk;
        }
        const real lambda = 1 / ssq;
        // map to (0,1): t = (1+u)/2, and the measure picks up 2^{-(a+b+1)}
        nodes[static_cast<std::size_t>(i)] = (1 + u[static_cast<std::size_t>(i)]) / 2;
        weights[static_cast<std::size_t>(i)] = lambda * exp(-(a + b + 1) * log(real(2)));
    }

    for (int i = 0; i < n; ++i) {
        const real& t = nodes[static_cast<std::size_t>(i)];
        if (!(t > 0) || !(t < 1)) throw std::runtime_error("gauss_jacobi_01: node escaped (0,1)");
        if (!(weights[static_cast<std::size_t>(i)] > 0))
            throw std::runtime_error("gauss_jacobi_01: nonpositive weight");
    }
}

namespace {

// Random monomial exponent of total order <= max_order, for the build-time
// exactness spot check.
MultiIndex random_monomial(DeterministicRng& rng, int dim, int max_order) {
    const int order = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_order + 1)));
    std::vector<int> e(static_cast<std::size_t>(dim), 0);
    for (int s = 0; s < order; ++s) ++e[rng.next_below(static_cast<std::uint64_t>(dim))];
    return MultiIndex(std::move(e));
}

void validate_rule(const BallRule& rule) {
    const MomentTable table(rule.weight(), rule.precision_bits());
    const real mass = table.monomial_moment(MultiIndex::zero(rule.dim()));
    real sum = pairwise_sum(rule.node_weights());
    if (relative_deviation(sum, mass, real(0)) > 1e-13)
        throw std::runtime_error("build_rule: total mass check failed");

    DeterministicRng rng(0x9d2c5680u + static_cast<std::uint64_t>(rule.exactness()) * 31u +
                         static_cast<std::uint64_t>(rule.dim()));
    for (int trial = 0; trial < 8; ++trial) {
        const MultiIndex gamma = random_monomial(rng, rule.dim(), rule.exactness());
        const real exact = table.monomial_moment(gamma);
        const real quad = rule.integrate(Polynomial::monomial(gamma));
        // Odd monomials integrate to exactly zero; their quadrature residue
        // is pure rounding noise, judged against the total mass scale.
        const real floor_scale = mass * 1e-12;
        if (relative_deviation(quad, exact, floor_scale) > 1e-12)
            throw std::runtime_error("build_rule: exactness check failed at monomial " + gamma.str());
    }
}

}  // namespace

BallRule build_rule(const WeightParam& w, int target_exactness) {
    w.validate();
    if (target_exactness < 0) throw std::invalid_argument("build_rule: exactness must be >= 0");
    if (w.dim > 3) throw std::invalid_argument("build_rule: only d <= 3 is supported");

    BallRule rule;
    rule.weight_ = w;
    rule.exactness_ = target_exactness;
    rule.bits_ = current_precision_bits();

    const int d = w.dim;
    const int radial_n = (target_exactness + 3) / 2;  // ceil((D+2)/2)
    std::vector<real> t, tw;
    gauss_jacobi_01(w.alpha, 0.5 * d - 1.0, radial_n, t, tw);

    const real pi = real(4) * atan(real(1));
    if (d == 1) {
        // x = +-sqrt(t), each side carrying half the radial weight
        for (int i = 0; i < radial_n; ++i) {
            const real r = sqrt(t[static_cast<std::size_t>(i)]);
            const real half = tw[static_cast<std::size_t>(i)] / 2;
            rule.coords_.push_back(r);
            rule.weights_.push_back(half);
            rule.coords_.push_back(-r);
            rule.weights_.push_back(half);
        }
    } else if (d == 2) {
        const int m_ang = target_exactness + 1;
        const real step = 2 * pi / m_ang;
        for (int i = 0; i < radial_n; ++i) {
            const real r = sqrt(t[static_cast<std::size_t>(i)]);
            // dx = (1/2) dt dtheta in the (t, theta) chart
            const real wi = tw[static_cast<std::size_t>(i)] / 2 * step;
            for (int j = 0; j < m_ang; ++j) {
                const real theta = step * j;
                rule.coords_.push_back(r * cos(theta));
                rule.coords_.push_back(r * sin(theta));
                rule.weights_.push_back(wi);
            }
        }
    } else {
        // polar factor: integral over cos(theta) in (-1,1) with unit weight
        const int polar_n = (target_exactness + 3) / 2;
        std::vector<real> c01, cw;
        gauss_jacobi_01(0.0, 0.0, polar_n, c01, cw);
        const int m_ang = target_exactness + 1;
        const real step = 2 * pi / m_ang;
        for (int i = 0; i < radial_n; ++i) {
            const real r = sqrt(t[static_cast<std::size_t>(i)]);
            const real wr = tw[static_cast<std::size_t>(i)] / 2;
            for (int k = 0; k < polar_n; ++k) {
                const real c = 2 * c01[static_cast<std::size_t>(k)] - 1;  // cos(theta)
                const real s = sqrt(1 - c * c);
                const real wc = 2 * cw[static_cast<std::size_t>(k)];      // d(cos) on (-1,1)
                for (int j = 0; j < m_ang; ++j) {
                    const real phi = step * j;
                    rule.coords_.push_back(r * s * cos(phi));
                    rule.coords_.push_back(r * s * sin(phi));
                    rule.coords_.push_back(r * c);
                    rule.weights_.push_back(wr * wc * step);
                }
            }
        }
    }

    for (std::size_t i = 0; i < rule.node_count(); ++i) {
        real norm_sq(0);
        for (const real& x : rule.node(i)) norm_sq += x * x;
        if (!(norm_sq < 1)) throw std::runtime_error("build_rule: node escaped the open ball");
    }
    validate_rule(rule);
    return rule;
}

real BallRule::integrate(const Integrand& f) const {
    std::vector<real> terms;
    terms.reserve(node_count());
    for (std::size_t i = 0; i < node_count(); ++i) terms.push_back(weights_[i] * f(node(i)));
    return pairwise_sum(terms);
}

real BallRule::integrate(const Polynomial& p) const {
    if (p.dim() != weight_.dim) throw std::invalid_argument("integrate: dimension mismatch");
    return integrate([&p](std::span<const real> x) { return p.eval(x); });
}

std::vector<real> eval_on_nodes(const Polynomial& p, const BallRule& rule) {
    if (p.dim() != rule.dim()) throw std::invalid_argument("eval_on_nodes: dimension mismatch");
    PrecisionScope scope(rule.precision_bits());
    const int d = rule.dim();
    const int deg = std::max(p.degree(), 0);
    std::vector<real> out(rule.node_count(), real(0));
    std::vector<std::vector<real>> powers(static_cast<std::size_t>(d),
                                          std::vector<real>(static_cast<std::size_t>(deg) + 1, real(1)));
    for (std::size_t i = 0; i < rule.node_count(); ++i) {
        const auto x = rule.node(i);
        for (int a = 0; a < d; ++a) {
            auto& t = powers[static_cast<std::size_t>(a)];
            for (int e = 1; e <= deg; ++e)
                t[static_cast<std::size_t>(e)] = t[static_cast<std::size_t>(e - 1)] * x[a];
        }
        real acc(0);
        for (const auto& [g, c] : p.terms()) {
            real v = c;
            for (int a = 0; a < d; ++a)
                v *= powers[static_cast<std::size_t>(a)][static_cast<std::size_t>(g[a])];
            acc += v;
        }
        out[i] = acc;
    }
    return out;
}

void BallRule::dump(std::ostream& os) const {
    os << "ball-rule v1\n";
    os << "dim " << weight_.dim << " alpha " << weight_.alpha << " exactness " << exactness_
       << " nodes " << node_count() << " precision_bits " << bits_ << "\n";
    for (std::size_t i = 0; i < node_count(); ++i) {
        for (const real& x : node(i)) os << to_decimal_string(x) << ' ';
        os << to_decimal_string(weights_[i]) << '\n';
    }
}

}  // namespace ballproj
