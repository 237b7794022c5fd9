#include "ballproj/moments.hpp"

#include <mutex>
#include <stdexcept>

namespace ballproj {

void WeightParam::validate() const {
    if (dim < 1) throw std::invalid_argument("WeightParam: dimension must be >= 1");
    if (!(alpha > -1.0)) throw std::invalid_argument("WeightParam: alpha must be > -1");
}

MomentTable::MomentTable(WeightParam w, unsigned precision_bits) : w_(w), bits_(precision_bits) {
    w_.validate();
}

real MomentTable::moment_closed_form(const MultiIndex& gamma) const {
    if (!gamma.all_even()) return real(0);
    // With beta = gamma / 2 the integral factors through polar coordinates:
    //   Gamma(alpha+1) * prod_i Gamma(beta_i + 1/2) / Gamma(|beta| + d/2 + alpha + 1).
    // Evaluated through log-gamma so large degrees cannot overflow.
    const real one(1);
    const real half = one / 2;
    const real a(w_.alpha);
    real acc = lgamma(real(a + 1));
    long beta_sum = 0;
    for (int i = 0; i < gamma.dim(); ++i) {
        const long beta_i = gamma[i] / 2;
        beta_sum += beta_i;
        acc += lgamma(real(real(beta_i) + half));
    }
    acc -= lgamma(real(real(beta_sum) + real(w_.dim) * half + a + 1));
    return exp(acc);
}

real MomentTable::monomial_moment(const MultiIndex& gamma) const {
    if (gamma.dim() != w_.dim) throw std::invalid_argument("monomial_moment: dimension mismatch");
    {
        std::shared_lock lock(cache_mutex_);
        auto it = cache_.find(gamma);
        if (it != cache_.end()) return it->second;
    }
    PrecisionScope scope(bits_);
    real value = moment_closed_form(gamma);
    std::unique_lock lock(cache_mutex_);
    auto [it, inserted] = cache_.emplace(gamma, value);
    (void)inserted;
    return it->second;
}

real MomentTable::inner(const Polynomial& p, const Polynomial& q) const {
    if (p.dim() != w_.dim || q.dim() != w_.dim) throw std::invalid_argument("inner: dimension mismatch");
    PrecisionScope scope(bits_);
    std::vector<real> products;
    products.reserve(p.term_count() * q.term_count());
    for (const auto& [gp, cp] : p.terms()) {
        for (const auto& [gq, cq] : q.terms()) {
            // Cross terms of opposite parity integrate to zero; skip the
            // lookup entirely.
            const MultiIndex sum = gp.plus(gq);
            if (!sum.all_even()) continue;
            products.push_back(cp * cq * monomial_moment(sum));
        }
    }
    return pairwise_sum(products);
}

real MomentTable::norm(const Polynomial& p) const {
    PrecisionScope scope(bits_);
    real sq = inner(p, p);
    if (sq < 0) sq = 0;  // roundoff guard for near-null polynomials
    return sqrt(sq);
}

Matrix MomentTable::gram_block(std::span<const MultiIndex> monomials) const {
    PrecisionScope scope(bits_);
    const std::size_t n = monomials.size();
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            real m = monomial_moment(monomials[i].plus(monomials[j]));
            g(i, j) = m;
            if (i != j) g(j, i) = m;
        }
    }
    return g;
}

}  // namespace ballproj
