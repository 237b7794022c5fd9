// Orthonormal bases of the degree-k orthogonal polynomial blocks on the
// ball, the component projectors and truncations built on them, and the
// projector identities that relate neighboring weights.
//
// Block k is the orthogonal complement of the lower-degree polynomials
// inside the degree-k polynomials: dimension C(k+d-1, d-1).  Because the
// weight is centrally symmetric, block-k elements carry only monomials of
// degree congruent to k mod 2, so the whole construction runs separately on
// the even and odd parity classes and cross-parity orthogonality is
// structural rather than numerical.
//
// Construction is blockwise Gram-Schmidt over monomial coordinates with a
// second re-orthogonalization pass, certified by the worst pairwise
// orthonormality residual.  If the certificate misses the tolerance the
// build restarts at doubled precision (monomial Gram matrices are
// exponentially ill-conditioned in the degree).

#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "ballproj/moments.hpp"
#include "ballproj/polynomial.hpp"
#include "ballproj/quadrature.hpp"
#include "ballproj/scalar.hpp"

namespace ballproj {

// Coefficients of a function against every stored basis element, kept per
// block so truncations are prefix sums.
struct Expansion {
    WeightParam weight{1, 0.0};
    std::vector<std::vector<real>> coefficients;  // [block k][element index]

    // sum of squared coefficients over blocks 0..n (all blocks if n < 0)
    real norm_squared(int n = -1) const;
};

// Largest degree the build accepts by default; monomial-coordinate builds
// beyond this are ill-conditioned enough to need impractical precision.
int default_degree_cap(int dim);

class OrthoBasis {
  public:
    // Deterministic for fixed (w, max_degree, tol).  Throws if the
    // certificate cannot reach tol at the precision cap, or if max_degree
    // exceeds the dimension cap and allow_over_cap is false.
    static OrthoBasis build(const WeightParam& w, int max_degree, double tol = 1e-20,
                            bool allow_over_cap = false);

    // Single-shot build at exactly the given precision, without escalation.
    // Diagnostic hook: lets callers compare identity residuals across
    // precisions.  Accepts whatever certificate results (recorded as usual).
    static OrthoBasis build_at_bits(const WeightParam& w, int max_degree, unsigned bits,
                                    bool allow_over_cap = false);

    const WeightParam& weight() const { return w_; }
    int max_degree() const { return max_degree_; }
    unsigned precision_bits() const { return bits_; }
    double tolerance() const { return tol_; }
    // max |<e_i, e_j> - delta_ij| over stored same-parity pairs (cross-parity
    // products vanish structurally)
    const real& certificate() const { return certificate_; }
    // re-derives the certificate from the stored coefficients; equals
    // certificate() up to rounding unless the object was tampered with
    real recompute_certificate() const { return compute_certificate(); }
    const MomentTable& moments() const { return *moments_; }

    int block_size(int k) const;
    // i-th element of block k as a standalone polynomial
    Polynomial element(int k, int i) const;

    // <u, e> for every element e of block k (empty for k < 0)
    std::vector<real> component_coefficients(const Polynomial& u, int k) const;
    // orthogonal projection of u onto block k; zero polynomial for k < 0
    Polynomial project_component(const Polynomial& u, int k) const;
    // partial sum of projections over blocks 0..n
    Polynomial truncate(const Polynomial& u, int n) const;

    Expansion expand(const Polynomial& u) const;
    // reassemble sum_{k<=n} sum_i c_{k,i} e_{k,i} (all blocks if n < 0)
    Polynomial synthesize(const Expansion& x, int n = -1) const;

    // versioned text export; consumed by the CLI and re-importable
    void export_text(std::ostream& os) const;
    static OrthoBasis import_text(std::istream& is);

    friend Expansion project_function(const OrthoBasis& basis, const Integrand& f,
                                      const BallRule& rule, int margin);

  private:
    OrthoBasis() = default;

    struct Element {
        int degree = 0;
        int parity = 0;
        std::vector<real> coeff;    // coordinates in the parity-class monomial list
        std::vector<real> gcoeff;   // Gram matrix times coeff (same class)
    };

    // attempts one build at the current thread precision; nullopt = rebuild
    // at higher precision
    static std::optional<OrthoBasis> try_build(const WeightParam& w, int max_degree, double tol,
                                               unsigned bits);
    real compute_certificate() const;

    // splits u into parity-class coordinate vectors; throws if deg u > N
    std::array<std::vector<real>, 2> class_coordinates(const Polynomial& u) const;
    Polynomial materialize(const std::array<std::vector<real>, 2>& coords) const;

    WeightParam w_{1, 0.0};
    int max_degree_ = 0;
    unsigned bits_ = 0;
    double tol_ = 0.0;
    real certificate_{0};
    std::shared_ptr<MomentTable> moments_;
    std::array<std::vector<MultiIndex>, 2> class_monos_;
    std::array<std::map<MultiIndex, std::size_t, GradedLexLess>, 2> class_pos_;
    std::vector<Element> elements_;
    std::vector<std::pair<std::size_t, std::size_t>> block_range_;  // [k] -> [begin,end)
};

OrthoBasis build_basis(const WeightParam& w, int max_degree, double tol = 1e-20);

// Checks that `raised` is the (alpha+1, same d) companion of `base`.
void require_weight_pair(const OrthoBasis& base, const OrthoBasis& raised);

// d_j(S^alpha_n u) - S^alpha_n(d_j u), computed literally from projections.
Polynomial commutator_direct(const OrthoBasis& base, const OrthoBasis& raised, const Polynomial& u,
                             int n, int axis);

// The telescoped form: proj^{alpha+1}_{n-1}(proj^alpha_{n+1}(d_j u)) -
// proj^{alpha+1}_n(proj^alpha_n(d_j u)).  Agrees with commutator_direct to
// working precision.
Polynomial commutator_formula(const OrthoBasis& base, const OrthoBasis& raised, const Polynomial& u,
                              int n, int axis);

// Residual of the projector shift identity between weights:
// || proj^{alpha+1}_k(u) - proj^alpha_k(u) - proj^{alpha+1}_k(proj^alpha_{k+2}(u))
//    + proj^{alpha+1}_{k-2}(proj^alpha_k(u)) ||_alpha
real id_shift_residual(const OrthoBasis& base, const OrthoBasis& raised, const Polynomial& u, int k);

// Expansion of a general function by quadrature.  Requires
// rule.exactness() >= 2 * basis.max_degree() + margin; refuses otherwise.
Expansion project_function(const OrthoBasis& basis, const Integrand& f, const BallRule& rule,
                           int margin = 20);

}  // namespace ballproj
