// Exact d-variate polynomial arithmetic in the monomial basis, plus the
// differential and multiplication operators the projection identities are
// built from: mixed partials, the angular derivatives x_i d_j - x_j d_i,
// multiplication by omega = 1 - |x|^2, the degree-raising operator
// -omega d_j + 2(alpha+1) x_j, and the Sturm-Liouville operator whose
// eigenspaces the orthogonal blocks are.
//
// Polynomials are immutable values; every operation returns a fresh
// normalized polynomial (no stored zero coefficients, degree consistent
// with the key set, zero polynomial has degree -1).

#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ballproj/multi_index.hpp"
#include "ballproj/scalar.hpp"

namespace ballproj {

class Polynomial {
  public:
    using TermMap = std::map<MultiIndex, real, GradedLexLess>;

    // zero polynomial
    explicit Polynomial(int dim);
    Polynomial(int dim, TermMap terms);

    static Polynomial constant(int dim, const real& c);
    static Polynomial monomial(const MultiIndex& gamma, const real& c = real(1));

    int dim() const { return dim_; }
    // -1 for the zero polynomial
    int degree() const;
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }
    // 0 if the monomial is absent
    real coefficient(const MultiIndex& gamma) const;
    // largest monomial in graded-lex order; polynomial must be nonzero
    const MultiIndex& leading_monomial() const;

    real eval(std::span<const real> x) const;
    real eval(const std::vector<real>& x) const { return eval(std::span<const real>(x)); }

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(const real& c);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial p, const real& c) { return p *= c; }
    friend Polynomial operator*(const real& c, Polynomial p) { return p *= c; }
    friend Polynomial operator-(Polynomial p) { return p *= real(-1); }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

    friend bool operator==(const Polynomial& a, const Polynomial& b);

    // x^gamma * p
    Polynomial shifted(const MultiIndex& gamma) const;

    std::string str() const;

  private:
    void add_term(const MultiIndex& gamma, const real& c);

    int dim_;
    TermMap terms_;
};

// d^{|gamma|} p / dx^gamma, exact
Polynomial partial(const Polynomial& p, const MultiIndex& gamma);
Polynomial partial(const Polynomial& p, int axis);

// (1 - |x|^2) * p
Polynomial multiply_omega(const Polynomial& p);

// D_{i,j} p = x_i d_j p - x_j d_i p; requires d >= 2 and 1 <= i < j <= d
Polynomial angular_derivative(const Polynomial& p, int i, int j);

// degree-raising operator: -(1 - |x|^2) d_j p + 2 (alpha + 1) x_j p
Polynomial raise(const Polynomial& p, double alpha, int axis);

// L p = -[(1-|x|^2) Lap p - 2(alpha+1) x.grad p] - sum_{i<j} D_{i,j}^2 p.
// Members of the degree-k orthogonal block are eigenfunctions with
// eigenvalue k (k + d + 2 alpha).
Polynomial sturm_liouville(const Polynomial& p, double alpha);

// gradient as a vector of partials
std::vector<Polynomial> gradient(const Polynomial& p);

// Textual serialization: one line per term, "g1 ... gd coefficient".
std::string to_term_lines(const Polynomial& p);
// Parses term lines for a given dimension; ignores blank lines.
Polynomial polynomial_from_term_lines(int dim, const std::string& lines);

}  // namespace ballproj
