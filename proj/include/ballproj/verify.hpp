// Executable verification of the projector and polynomial-space identities:
// orthonormality, parity, the weak eigenvalue relation, the shift identities
// between the alpha and alpha+1 weights, the adjoint relation between
// differentiation and the raising operator, the telescoped commutator, the
// one-variable Jacobi cross-checks, and the Markov extremal constant.
// Equalities are checked as relative residuals; one-sided bounds as absolute
// slack excesses.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ballproj/ortho_basis.hpp"

namespace ballproj {

struct VerifyReport {
    std::string check;
    int dim = 0;
    double alpha = 0.0;
    int degree = -1;  // block or truncation degree at the worst residual; -1 if n/a
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

std::string to_json_line(const VerifyReport& report);
bool all_pass(const std::vector<VerifyReport>& reports);

struct IdentityGrid {
    std::vector<int> dims{1, 2, 3};
    std::vector<double> alphas{-0.5, 0.0, 1.0, 2.5};
    int max_degree = 10;    // degree sweep bound for dimensions 1 and 2
    int max_degree_d3 = 8;  // tighter bound in dimension 3
    double tolerance = 1e-9;          // equality checks, relative
    double inequality_slack = 1e-12;  // one-sided checks, absolute
    int samples = 100;                // random draws per grid point
    std::uint64_t seed = 20240915;
    int threads = 1;
};

// One report per (check, d, alpha), worst case over degrees, axes and random
// samples; deterministic for a fixed grid, including under threading.  A
// grid point whose basis fails to build yields failing reports with the
// error recorded, and the sweep continues.
std::vector<VerifyReport> run_identity_suite(const IdentityGrid& grid);

// P_k^{(alpha,alpha)} by the three-term recurrence at the current working
// precision (dimension 1).
Polynomial jacobi_reference(double alpha, int k);

// Residuals of the classical shift identities for symmetric Jacobi
// polynomials: the degree-raising derivative relation and the two-term
// weight-shift relation.  The degenerate (alpha = -1/2, k = 0) weight-shift
// case is skipped with a note.
std::vector<VerifyReport> jacobi_identity_checks(double alpha, int k_max, double tolerance = 1e-10);

// Compares every block of a one-dimensional basis against the normalized
// Jacobi polynomial of the same degree, up to sign.
VerifyReport jacobi_basis_crosscheck(const OrthoBasis& basis, double tolerance = 1e-9);

// max ||grad p||_alpha / ||p||_alpha over nonzero p of degree <= n: the
// square root of the largest eigenvalue of the gradient Gram matrix in the
// orthonormal basis.  Zero for n = 0.
real markov_constant(const OrthoBasis& basis, int n);

}  // namespace ballproj
