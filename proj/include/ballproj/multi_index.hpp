// Multi-indices: exponent vectors of d-variate monomials, graded
// lexicographic ordering, and the enumeration routines every other module
// iterates with.  All enumeration output is in canonical graded-lex
// ascending order so reports are reproducible bit for bit.

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace ballproj {

class MultiIndex {
  public:
    explicit MultiIndex(std::vector<int> exponents);

    static MultiIndex zero(int dim);
    // e_j, axes counted from 1 as in the operator definitions.
    static MultiIndex unit(int dim, int axis);

    int dim() const { return static_cast<int>(e_.size()); }
    int order() const { return order_; }
    int operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& exponents() const { return e_; }

    MultiIndex plus(const MultiIndex& other) const;
    // gamma - e_axis, exponent must be positive
    MultiIndex lowered(int axis) const;
    MultiIndex raised(int axis) const;

    bool all_even() const;

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.e_ == b.e_; }

    std::string str() const;

  private:
    std::vector<int> e_;
    int order_;
};

// Graded-lex: lower total order first; ties broken lexicographically on the
// exponent vector.
struct GradedLexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

// All multi-indices of exact order k in dimension d, graded-lex ascending.
std::vector<MultiIndex> indices_of_order(int dim, int k);
// All multi-indices of order <= n, graded-lex ascending.
std::vector<MultiIndex> indices_up_to_order(int dim, int n);

// Number of d-variate monomials of exact degree k: C(k+d-1, d-1).
std::int64_t monomial_count(int dim, int k);
// dim of the full polynomial space of degree <= n: C(n+d, d).
std::int64_t polynomial_space_dim(int dim, int n);

// k! / (gamma_1! ... gamma_d!) for |gamma| = k; the multiplicity of the
// mixed derivative inside the k-th gradient tensor.
std::int64_t multinomial(const MultiIndex& gamma);

}  // namespace ballproj
