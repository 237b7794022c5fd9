#include "ballproj/sobolev.hpp"

#include <stdexcept>
#include <string>

namespace ballproj {

Integrand SmoothFunction::slice(const MultiIndex& gamma) const {
    if (gamma.dim() != dim) throw std::invalid_argument("smooth function: dimension mismatch");
    if (gamma.order() > max_order)
        throw std::invalid_argument("smooth function: derivative order " +
                                    std::to_string(gamma.order()) + " exceeds declared order " +
                                    std::to_string(max_order));
    return [f = derivative, g = gamma](std::span<const real> x) { return f(x, g); };
}

SmoothFunction smooth_from_polynomial(const Polynomial& p) {
    SmoothFunction f;
    f.dim = p.dim();
    // every derivative of a polynomial is exact (zero past the degree), so
    // any order a caller can reasonably request is available
    f.max_order = 1000;
    f.derivative = [p](std::span<const real> x, const MultiIndex& gamma) {
        return partial(p, gamma).eval(x);
    };
    return f;
}

real seminorm_poly(const MomentTable& table, const Polynomial& u, int k) {
    if (k < 0) throw std::invalid_argument("seminorm: order must be >= 0");
    if (u.dim() != table.weight().dim)
        throw std::invalid_argument("seminorm: dimension mismatch");
    PrecisionScope scope(table.precision_bits());
    std::vector<real> parts;
    for (const MultiIndex& gamma : indices_of_order(table.weight().dim, k)) {
        const Polynomial du = partial(u, gamma);
        if (du.is_zero()) continue;
        parts.push_back(real(multinomial(gamma)) * table.inner(du, du));
    }
    real sq = pairwise_sum(parts);
    if (sq < 0) sq = 0;  // rounding guard; the sum is a sum of squares
    return sqrt(sq);
}

SobolevNormReport hnorm_poly(const MomentTable& table, const Polynomial& u, int l) {
    if (l < 0) throw std::invalid_argument("norm report: order must be >= 0");
    PrecisionScope scope(table.precision_bits());
    SobolevNormReport report;
    report.weight = table.weight();
    report.order = l;
    std::vector<real> squares;
    for (int k = 0; k <= l; ++k) {
        report.seminorms.push_back(seminorm_poly(table, u, k));
        squares.push_back(report.seminorms.back() * report.seminorms.back());
    }
    report.total = sqrt(pairwise_sum(squares));
    return report;
}

SobolevNormReport hnorm_function(const WeightParam& w, const SmoothFunction& f, int l,
                                 const BallRule& rule) {
    w.validate();
    if (l < 0) throw std::invalid_argument("norm report: order must be >= 0");
    if (f.dim != w.dim || rule.weight().dim != w.dim)
        throw std::invalid_argument("norm report: dimension mismatch");
    if (rule.weight().alpha != w.alpha)
        throw std::invalid_argument("norm report: rule was built for a different weight");
    if (l > f.max_order)
        throw std::invalid_argument("norm report: function lacks derivatives of order " +
                                    std::to_string(l));
    PrecisionScope scope(rule.precision_bits());
    SobolevNormReport report;
    report.weight = w;
    report.order = l;
    std::vector<real> squares;
    for (int k = 0; k <= l; ++k) {
        std::vector<real> parts;
        for (const MultiIndex& gamma : indices_of_order(w.dim, k)) {
            const Integrand dg = f.slice(gamma);
            const real norm_sq = rule.integrate([&dg](std::span<const real> x) {
                const real v = dg(x);
                return v * v;
            });
            parts.push_back(real(multinomial(gamma)) * norm_sq);
        }
        real sq = pairwise_sum(parts);
        if (sq < 0) sq = 0;
        report.seminorms.push_back(sqrt(sq));
        squares.push_back(sq);
    }
    report.total = sqrt(pairwise_sum(squares));
    return report;
}

std::vector<real> residual_norms(const OrthoBasis& basis, const SmoothFunction& f,
                                 const BallRule& rule, const Expansion& expansion, int n, int r) {
    const int d = basis.weight().dim;
    if (f.dim != d) throw std::invalid_argument("residual norms: dimension mismatch");
    if (n < 0 || n > basis.max_degree())
        throw std::invalid_argument("residual norms: truncation degree out of basis range");
    if (r < 0) throw std::invalid_argument("residual norms: order must be >= 0");
    if (r > f.max_order)
        throw std::invalid_argument("residual norms: function lacks derivatives of order " +
                                    std::to_string(r));
    PrecisionScope scope(basis.precision_bits());
    const Polynomial s = basis.synthesize(expansion, n);

    std::vector<real> norms;
    std::vector<real> squares;
    for (int k = 0; k <= r; ++k) {
        std::vector<real> parts;
        for (const MultiIndex& gamma : indices_of_order(d, k)) {
            const Integrand dg = f.slice(gamma);
            const std::vector<real> ds = eval_on_nodes(partial(s, gamma), rule);
            // sum w_i (d_gamma f - d_gamma s)^2 at the nodes, pairwise
            std::vector<real> terms;
            terms.reserve(rule.node_count());
            const std::vector<real>& wts = rule.node_weights();
            for (std::size_t i = 0; i < rule.node_count(); ++i) {
                const real diff = dg(rule.node(i)) - ds[i];
                terms.push_back(wts[i] * diff * diff);
            }
            parts.push_back(real(multinomial(gamma)) * pairwise_sum(terms));
        }
        real sq = pairwise_sum(parts);
        if (sq < 0) sq = 0;
        squares.push_back(sq);
        norms.push_back(sqrt(pairwise_sum(squares)));
    }
    return norms;
}

std::vector<real> residual_norms(const OrthoBasis& basis, const SmoothFunction& f,
                                 const BallRule& rule, int n, int r) {
    const Expansion expansion = project_function(basis, f.slice(MultiIndex::zero(f.dim)), rule);
    return residual_norms(basis, f, rule, expansion, n, r);
}

}  // namespace ballproj
