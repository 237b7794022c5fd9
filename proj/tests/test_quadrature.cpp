#include <doctest.h>

#include <sstream>
#include <stdexcept>
#include <vector>

#include "ballproj/quadrature.hpp"
#include "test_support.hpp"

using namespace ballproj;
using ballproj::testing::check_close;

TEST_SUITE("quadrature") {

TEST_CASE("gauss rule on (0,1) reproduces Beta-function moments") {
    PrecisionScope scope(192);
    // int_0^1 (1-t)^p t^(q+k) dt = B(q+k+1, p+1)
    for (double p : {-0.5, 0.0, 1.0, 2.5}) {
        for (double q : {-0.5, 0.0, 0.5}) {
            std::vector<real> t, w;
            gauss_jacobi_01(p, q, 6, t, w);
            for (int k = 0; k <= 11; ++k) {  // 6 nodes: exact through degree 11
                std::vector<real> terms(t.size());
                for (std::size_t i = 0; i < t.size(); ++i) terms[i] = w[i] * pow(t[i], k);
                real got = pairwise_sum(terms);
                real want = exp(lgamma(real(q) + k + 1) + lgamma(real(p) + 1) -
                                lgamma(real(q) + k + real(p) + 2));
                check_close(got, want, 1e-45);
            }
        }
    }
    std::vector<real> t, w;
    CHECK_THROWS_AS(gauss_jacobi_01(-1.0, 0.0, 3, t, w), std::invalid_argument);
    CHECK_THROWS_AS(gauss_jacobi_01(0.0, 0.0, 0, t, w), std::invalid_argument);
}

TEST_CASE("ball rules match the moment closed form in both directions") {
    PrecisionScope scope(192);
    for (int d = 1; d <= 3; ++d) {
        for (double a : {-0.5, 0.0, 1.0, 2.5}) {
            const int cap = d == 3 ? 8 : 10;
            BallRule rule = build_rule(WeightParam{d, a}, cap);
            MomentTable table(WeightParam{d, a});
            const real mass = table.monomial_moment(MultiIndex::zero(d));
            for (int k = 0; k <= cap; ++k) {
                for (const MultiIndex& g : indices_of_order(d, k)) {
                    real got = rule.integrate(Polynomial::monomial(g));
                    real want = table.monomial_moment(g);
                    CHECK(ballproj::testing::deviation(got, want, to_double(mass) * 1e-35) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("spec spot values") {
    PrecisionScope scope(128);
    BallRule r1 = build_rule(WeightParam{1, 0.0}, 3);
    check_close(r1.integrate(Polynomial::monomial(MultiIndex({2}))), real(2) / 3, 1e-14);

    BallRule r2 = build_rule(WeightParam{2, 1.0}, 8);
    MomentTable t2(WeightParam{2, 1.0});
    check_close(r2.integrate(Polynomial::monomial(MultiIndex({4, 2}))),
                t2.monomial_moment(MultiIndex({4, 2})), 1e-12);
}

TEST_CASE("total mass and node placement invariants") {
    PrecisionScope scope(160);
    for (int d = 1; d <= 3; ++d) {
        BallRule rule = build_rule(WeightParam{d, 0.5}, 6);
        MomentTable table(WeightParam{d, 0.5});
        check_close(pairwise_sum(rule.node_weights()), table.monomial_moment(MultiIndex::zero(d)),
                    1e-13);
        for (std::size_t i = 0; i < rule.node_count(); ++i) {
            real nsq(0);
            for (const real& x : rule.node(i)) nsq += x * x;
            CHECK(nsq < 1);
            CHECK(rule.node_weights()[i] > 0);
        }
    }
}

TEST_CASE("doubling the target exactness leaves smooth integrals unchanged") {
    PrecisionScope scope(160);
    Integrand f = [](std::span<const real> x) {
        real s(0);
        for (const real& xi : x) s += xi;
        return exp(s);
    };
    for (int d = 1; d <= 2; ++d) {
        BallRule coarse = build_rule(WeightParam{d, 1.0}, 20);
        BallRule fine = build_rule(WeightParam{d, 1.0}, 40);
        check_close(coarse.integrate(f), fine.integrate(f), 1e-10);
    }
}

TEST_CASE("rule dump is a parseable audit record") {
    PrecisionScope scope(96);
    BallRule rule = build_rule(WeightParam{2, 0.0}, 4);
    std::ostringstream os;
    rule.dump(os);
    std::istringstream is(os.str());
    std::string tag, version;
    is >> tag >> version;
    CHECK(tag == "ball-rule");
    std::string key;
    int dim = 0;
    is >> key >> dim;
    CHECK(key == "dim");
    CHECK(dim == 2);
    // count the node lines
    std::string rest;
    std::getline(is, rest);  // remainder of header
    std::size_t lines = 0;
    while (std::getline(is, rest))
        if (!rest.empty()) ++lines;
    CHECK(lines == rule.node_count());
}

TEST_CASE("build rejections") {
    PrecisionScope scope(96);
    CHECK_THROWS_AS(build_rule(WeightParam{4, 0.0}, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_rule(WeightParam{2, 0.0}, -1), std::invalid_argument);
    CHECK_THROWS_AS(build_rule(WeightParam{2, -1.0}, 4), std::invalid_argument);
}

}  // TEST_SUITE
