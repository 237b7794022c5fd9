// Exact weighted integration of polynomials over the unit ball B^d with the
// weight (1 - |x|^2)^alpha, alpha > -1.  Monomial moments have a closed form
// in Gamma functions; everything else is bilinear expansion over them.

#pragma once

#include <shared_mutex>
#include <span>
#include <vector>

#include "ballproj/linalg.hpp"
#include "ballproj/multi_index.hpp"
#include "ballproj/polynomial.hpp"
#include "ballproj/scalar.hpp"

namespace ballproj {

struct WeightParam {
    int dim;       // ambient dimension d >= 1
    double alpha;  // weight exponent, must stay > -1 for integrability

    void validate() const;
};

// Memoized moment/inner-product context for one (d, alpha) weight at a fixed
// working precision.  Reads are concurrent; inserts synchronize internally.
class MomentTable {
  public:
    explicit MomentTable(WeightParam w, unsigned precision_bits = current_precision_bits());

    const WeightParam& weight() const { return w_; }
    unsigned precision_bits() const { return bits_; }

    // integral over B^d of x^gamma (1-|x|^2)^alpha dx; zero when any exponent
    // is odd, otherwise Gamma(alpha+1) prod_i Gamma(beta_i+1/2) /
    // Gamma(|beta|+d/2+alpha+1) with beta = gamma/2.
    real monomial_moment(const MultiIndex& gamma) const;

    // <p, q> under the weight, by bilinear expansion over monomial moments.
    real inner(const Polynomial& p, const Polynomial& q) const;

    real norm(const Polynomial& p) const;

    // Gram matrix of the listed monomials (symmetric positive definite).
    Matrix gram_block(std::span<const MultiIndex> monomials) const;

  private:
    real moment_closed_form(const MultiIndex& gamma) const;

    WeightParam w_;
    unsigned bits_;
    mutable std::map<MultiIndex, real, GradedLexLess> cache_;
    mutable std::shared_mutex cache_mutex_;
};

}  // namespace ballproj
