// Product quadrature on the unit ball against the weight (1-|x|^2)^alpha
// for d in {1,2,3}: the substitution t = r^2 turns the radial factor into a
// Jacobi weight (1-t)^alpha t^{d/2-1} on (0,1) handled by a Gauss rule; the
// angular factor is a reflection pair (d=1), an equispaced circle rule
// (d=2), or Gauss in cos(theta) times an equispaced azimuth rule (d=3).
//
// Rules validate themselves at build time: total mass against the moment
// closed form and declared exactness on a random sample of monomials.

#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "ballproj/moments.hpp"
#include "ballproj/scalar.hpp"

namespace ballproj {

using Integrand = std::function<real(std::span<const real>)>;

// Gauss rule with m nodes for the weight (1-t)^p t^q on (0,1), exact for
// polynomial degree <= 2m-1.  Nodes ascending, weights positive.
void gauss_jacobi_01(double p, double q, int m, std::vector<real>& nodes, std::vector<real>& weights);

class BallRule {
  public:
    const WeightParam& weight() const { return weight_; }
    int dim() const { return weight_.dim; }
    // largest total degree the rule reproduces exactly
    int exactness() const { return exactness_; }
    unsigned precision_bits() const { return bits_; }

    std::size_t node_count() const { return weights_.size(); }
    std::span<const real> node(std::size_t i) const {
        return {coords_.data() + i * static_cast<std::size_t>(weight_.dim),
                static_cast<std::size_t>(weight_.dim)};
    }
    const std::vector<real>& node_weights() const { return weights_; }

    // sum_i w_i f(x_i) with a deterministic pairwise reduction
    real integrate(const Integrand& f) const;
    real integrate(const Polynomial& p) const;

    // audit dump: header plus one line per node ("x_1 ... x_d weight")
    void dump(std::ostream& os) const;

    friend BallRule build_rule(const WeightParam& w, int target_exactness);

  private:
    BallRule() = default;

    WeightParam weight_{1, 0.0};
    int exactness_ = 0;
    unsigned bits_ = 0;
    std::vector<real> coords_;   // flat, node-major
    std::vector<real> weights_;
};

BallRule build_rule(const WeightParam& w, int target_exactness);

// Values of p at every node, computed through per-node coordinate power
// tables; much faster than calling p.eval node by node when p has many terms.
std::vector<real> eval_on_nodes(const Polynomial& p, const BallRule& rule);

}  // namespace ballproj
