#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ballproj/experiments.hpp"
#include "ballproj/moments.hpp"
#include "ballproj/ortho_basis.hpp"
#include "ballproj/quadrature.hpp"
#include "ballproj/sobolev.hpp"
#include "ballproj/test_functions.hpp"
#include "test_support.hpp"

using namespace ballproj;
using testing::check_close;

namespace {

// a test function with no closed-form hooks, so every error measurement is
// forced through the quadrature route
TestFunction without_hooks(TestFunction f) {
    f.exact_inner = nullptr;
    f.exact_norm_squared = nullptr;
    return f;
}

TestFunction from_polynomial(const Polynomial& p, const std::string& name) {
    TestFunction f;
    f.name = name;
    f.f = smooth_from_polynomial(p);
    f.regularity = [](double) { return 1000; };
    f.regularity_note = "polynomial: member of every order";
    return f;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("bound exponent matches the two-branch envelope") {
    // r = 0 collapses to the plain decay order
    CHECK(rate_bound_exponent(0, 0) == doctest::Approx(0.0));
    CHECK(rate_bound_exponent(2, 0) == doctest::Approx(-2.0));
    CHECK(rate_bound_exponent(5, 0) == doctest::Approx(-5.0));
    // both branches meet at r = 1
    CHECK(rate_bound_exponent(2, 1) == doctest::Approx(1.5 - 2.0));
    CHECK(rate_bound_exponent(8, 1) == doctest::Approx(1.5 - 8.0));
    // second branch
    CHECK(rate_bound_exponent(3, 2) == doctest::Approx(0.5));
    CHECK(rate_bound_exponent(2, 2) == doctest::Approx(1.5));
    CHECK(rate_bound_exponent(6, 3) == doctest::Approx(-0.5));
    CHECK_THROWS_AS(rate_bound_exponent(2, -1), std::invalid_argument);
    CHECK_THROWS_AS(rate_bound_exponent(2, 3), std::invalid_argument);
}

TEST_CASE("default degree grids are increasing and capped") {
    for (int d : {1, 2, 3}) {
        const std::vector<int> grid = default_degree_grid(d);
        CHECK(grid.size() == 6);
        for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
        CHECK(grid.back() <= default_degree_cap(d));
    }
    CHECK(default_degree_grid(1).back() == 40);
    CHECK(default_degree_grid(2).back() == 24);
    CHECK(default_degree_grid(3).back() == 14);
    CHECK_THROWS_AS(default_degree_grid(0), std::invalid_argument);
    CHECK_THROWS_AS(default_degree_grid(4), std::invalid_argument);
}

TEST_CASE("polynomial input reproduces exactly once the degree is covered") {
    PrecisionScope scope(256);
    const WeightParam w{1, 0.5};
    const OrthoBasis basis = build_basis(w, 8);
    const BallRule rule = build_rule(w, 2 * 8 + 20);
    // x^3 - x + 1/2: truncations below degree 3 miss it, the rest restore it
    Polynomial p = Polynomial::monomial(MultiIndex({3}));
    p -= Polynomial::monomial(MultiIndex({1}));
    p += Polynomial::constant(1, real(1) / 2);
    const TestFunction f = from_polynomial(p, "cubic");

    const RateReport rep = run_l2_rate(basis, rule, f, {2, 3, 5, 7});
    REQUIRE(rep.points.size() == 4);
    CHECK(rep.points[0].error > 1e-3);  // the cubic block is genuinely missing
    for (std::size_t i = 1; i < rep.points.size(); ++i) CHECK(rep.points[i].error < 1e-20);
    CHECK(rep.compliant);
    CHECK(rep.l == 8);  // sentinel tag capped
    CHECK(rep.note.find("capped") != std::string::npos);
    CHECK(rep.note.find("sharpness not asserted") != std::string::npos);

    // Sobolev orders reproduce as well
    const RateReport rep1 = run_sobolev_rate(basis, rule, f, 1, {3, 5, 7});
    for (const RatePoint& pt : rep1.points) CHECK(pt.error < 1e-18);
    CHECK(rep1.compliant);
}

TEST_CASE("boundary family obeys the L2 decay bound and beats it") {
    PrecisionScope scope(256);
    const WeightParam w{1, 0.0};
    const OrthoBasis basis = build_basis(w, 20);
    const BallRule rule = build_rule(w, 2 * 20 + 20);
    const TestFunction f = boundary_power(1, 2.5, 2);
    const std::vector<int> grid{8, 12, 16, 20};

    const RateReport rep = run_l2_rate(basis, rule, f, grid);
    CHECK(rep.l == 2);  // membership threshold: l < s + (alpha+1)/2 = 3
    CHECK(rep.bound_exponent == doctest::Approx(-2.0));
    CHECK(rep.compliant);
    CHECK(rep.note.find("closed-form") != std::string::npos);
    // the family decays much faster than its membership bound; every ratio
    // step should drop outright, not just stay bounded
    for (std::size_t i = 1; i < rep.points.size(); ++i)
        CHECK(rep.points[i].ratio < rep.points[i - 1].ratio);
    CHECK(rep.fit_valid);
    CHECK(rep.fit.slope < -4.0);
    CHECK(rep.fit.slope > -8.0);

    // independent oracle for one grid point: Parseval against the dedicated
    // boundary-family expansion route
    const Expansion x = boundary_exact_expansion(basis, 2.5);
    const real parseval = sqrt(boundary_norm_squared(w, 2.5) - x.norm_squared(8));
    check_close(real(rep.points[0].error), parseval, 1e-10);
}

TEST_CASE("closed-form and quadrature error routes agree at moderate degree") {
    PrecisionScope scope(256);
    const WeightParam w{1, 0.0};
    const OrthoBasis basis = build_basis(w, 10);
    const BallRule rule = build_rule(w, 300);  // deep rule: the integrand is not a polynomial
    const TestFunction f = boundary_power(1, 2.5, 2);
    const std::vector<int> grid{4, 8};

    const RateReport exact_l2 = run_l2_rate(basis, rule, f, grid);
    const RateReport quad_l2 = run_l2_rate(basis, rule, without_hooks(f), grid);
    REQUIRE(exact_l2.points.size() == quad_l2.points.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(exact_l2.points[i].error ==
              doctest::Approx(quad_l2.points[i].error).epsilon(1e-6));
    }
    CHECK(exact_l2.note.find("closed-form") != std::string::npos);
    CHECK(quad_l2.note.find("quadrature") != std::string::npos);

    const RateReport exact_h1 = run_sobolev_rate(basis, rule, f, 1, grid);
    const RateReport quad_h1 = run_sobolev_rate(basis, rule, without_hooks(f), 1, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(exact_h1.points[i].error ==
              doctest::Approx(quad_h1.points[i].error).epsilon(1e-6));
        // the H1 residual dominates the L2 residual pointwise
        CHECK(exact_h1.points[i].error >= exact_l2.points[i].error * (1.0 - 1e-12));
    }
}

TEST_CASE("Sobolev rate report carries the right exponents and notes") {
    PrecisionScope scope(256);
    const WeightParam w{1, 0.0};
    const OrthoBasis basis = build_basis(w, 20);
    const BallRule rule = build_rule(w, 2 * 20 + 20);
    const TestFunction f = boundary_power(1, 2.5, 3);
    const std::vector<int> grid{8, 12, 16, 20};

    const RateReport h1 = run_sobolev_rate(basis, rule, f, 1, grid);
    CHECK(h1.r == 1);
    CHECK(h1.bound_exponent == doctest::Approx(-0.5));
    CHECK(h1.compliant);
    CHECK(h1.id.find("sobolev") == 0);
    CHECK(h1.id.find(":r1") != std::string::npos);

    // r = l: the bound exponent turns positive and the report must say that
    // divergence is permitted
    const RateReport h2 = run_sobolev_rate(basis, rule, f, 2, grid);
    CHECK(h2.bound_exponent == doctest::Approx(1.5));
    CHECK(h2.note.find("divergence permitted") != std::string::npos);
    for (const RatePoint& pt : h2.points) CHECK(std::isfinite(pt.error));
}

TEST_CASE("commutator vanishes on covered polynomials") {
    PrecisionScope scope(256);
    const WeightParam w{1, 0.5};
    const OrthoBasis base = build_basis(w, 8);
    const OrthoBasis raised = build_basis(WeightParam{1, 1.5}, 8);
    const BallRule rule = build_rule(w, 2 * 8 + 20);
    Polynomial p = Polynomial::monomial(MultiIndex({3}), real(2));
    p += Polynomial::monomial(MultiIndex({2}), real(-1));
    const TestFunction f = from_polynomial(p, "cubic");

    const RateReport rep = run_commutator_rate(base, raised, rule, f, {3, 5, 7});
    for (const RatePoint& pt : rep.points) CHECK(pt.error < 1e-18);
    CHECK(rep.compliant);
    CHECK(rep.id.find("commutator") == 0);
}

TEST_CASE("commutator decay for the boundary family meets the lemma exponent") {
    PrecisionScope scope(256);
    const WeightParam w{1, 0.0};
    const OrthoBasis base = build_basis(w, 19);
    const OrthoBasis raised = build_basis(WeightParam{1, 1.0}, 19);
    const BallRule rule = build_rule(w, 2 * 19 + 20);
    const TestFunction f = boundary_power(1, 2.5, 2);

    const RateReport rep = run_commutator_rate(base, raised, rule, f, {6, 10, 14, 18});
    CHECK(rep.l == 2);
    CHECK(rep.bound_exponent == doctest::Approx(-0.5));
    CHECK(rep.compliant);
    CHECK(rep.note.find("worst axis") != std::string::npos);
    for (const RatePoint& pt : rep.points) CHECK(pt.error > 0.0);
    // commutator errors decay, and strictly so for this family
    for (std::size_t i = 1; i < rep.points.size(); ++i)
        CHECK(rep.points[i].error < rep.points[i - 1].error);
}

TEST_CASE("commutator through quadrature: entire function in two dimensions") {
    PrecisionScope scope(256);
    const WeightParam w{2, 1.0};
    const OrthoBasis base = build_basis(w, 9);
    const OrthoBasis raised = build_basis(WeightParam{2, 2.0}, 9);
    const BallRule rule = build_rule(w, 2 * 9 + 20);
    const TestFunction f = entire_exponential(2, {1.0, 0.0}, 2);

    const RateReport rep = run_commutator_rate(base, raised, rule, f, {4, 6, 8});
    CHECK(rep.l == 8);  // sentinel capped
    CHECK(rep.bound_exponent == doctest::Approx(1.5 - 8.0));
    CHECK(rep.note.find("quadrature") != std::string::npos);
    CHECK(rep.compliant);
    // super-polynomial decay: errors fall fast even against the steep bound
    for (std::size_t i = 1; i < rep.points.size(); ++i)
        CHECK(rep.points[i].error < rep.points[i - 1].error * 0.2);
}

TEST_CASE("doubling the quadrature exactness leaves reported errors in place") {
    PrecisionScope scope(256);
    const WeightParam w{1, 0.0};
    const OrthoBasis basis = build_basis(w, 8);
    const TestFunction f = entire_exponential(1, {0.8}, 1);
    const std::vector<int> grid{4, 6, 8};

    const RateReport coarse = run_l2_rate(basis, build_rule(w, 36), f, grid);
    const RateReport fine = run_l2_rate(basis, build_rule(w, 72), f, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(coarse.points[i].error ==
              doctest::Approx(fine.points[i].error).epsilon(1e-3));
    }
    // spectral decay: fitted slope falls below every fixed power we test
    CHECK(fine.fit_valid);
    CHECK(fine.fit.slope < -6.0);
}

TEST_CASE("reports serialize to CSV and a single JSON line") {
    PrecisionScope scope(256);
    const WeightParam w{1, 0.0};
    const OrthoBasis basis = build_basis(w, 10);
    const BallRule rule = build_rule(w, 2 * 10 + 20);
    const TestFunction f = boundary_power(1, 1.5, 1);
    const RateReport rep = run_l2_rate(basis, rule, f, {4, 6, 8, 10});

    std::ostringstream csv;
    write_csv(rep, csv);
    std::istringstream lines(csv.str());
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "N,error,bound_exponent,ratio");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 3);
    }
    CHECK(rows == 4);
    CHECK(csv.str().find("\n4,") != std::string::npos);

    const std::string json = rate_report_json(rep);
    CHECK(json.find('\n') == std::string::npos);
    CHECK(json.front() == '{');
    CHECK(json.back() == '}');
    CHECK(json.find("\"id\":\"l2:") == 1);
    CHECK(json.find("\"compliant\":true") != std::string::npos);
    CHECK(json.find("\"points\":[{\"n\":4,") != std::string::npos);
    CHECK(json.find("\"l\":1") != std::string::npos);
}

TEST_CASE("input validation") {
    PrecisionScope scope(256);
    const WeightParam w{1, 0.0};
    const OrthoBasis basis = build_basis(w, 6);
    const BallRule rule = build_rule(w, 2 * 6 + 20);
    const TestFunction f = boundary_power(1, 2.5, 3);

    CHECK_THROWS_AS(run_l2_rate(basis, rule, f, {}), std::invalid_argument);
    CHECK_THROWS_AS(run_l2_rate(basis, rule, f, {4, 4}), std::invalid_argument);
    CHECK_THROWS_AS(run_l2_rate(basis, rule, f, {4, 8}), std::invalid_argument);  // 8 > basis cap 6
    CHECK_THROWS_AS(run_sobolev_rate(basis, rule, f, 0, {4, 6}), std::invalid_argument);
    CHECK_THROWS_AS(run_sobolev_rate(basis, rule, f, 3, {4, 6}),
                    std::invalid_argument);  // r = 3 > l = 2
    const TestFunction f2 = boundary_power(2, 2.5, 2);
    CHECK_THROWS_AS(run_l2_rate(basis, rule, f2, {4}), std::invalid_argument);  // dim mismatch

    const OrthoBasis raised = build_basis(WeightParam{1, 1.0}, 6);
    CHECK_THROWS_AS(run_commutator_rate(basis, raised, rule, f, {6}),
                    std::invalid_argument);  // needs degree 7 bases
    CHECK_THROWS_AS(run_commutator_rate(basis, basis, rule, f, {4}),
                    std::invalid_argument);  // not a weight pair
}

}  // TEST_SUITE
