#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "sqed/quadrature.hpp"

using namespace sqed;

TEST_CASE("Gauss-Hermite moments") {
    const auto rule = gauss_hermite(15);
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        m0 += rule.weights[i];
        m1 += rule.weights[i] * rule.nodes[i];
        m2 += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    }
    const double rt_pi = std::sqrt(std::numbers::pi);
    CHECK(m0 == doctest::Approx(rt_pi).epsilon(1e-13));
    CHECK(std::abs(m1) < 1e-13);
    CHECK(m2 == doctest::Approx(rt_pi / 2.0).epsilon(1e-13));
}

TEST_CASE("polynomial exactness up to degree 2n-1") {
    // moment integral of x^(2k) against exp(-x^2): sqrt(pi) (2k-1)!! / 2^k
    const int order = 8;
    const auto rule = gauss_hermite(order);
    double expect = std::sqrt(std::numbers::pi);
    for (int k = 1; 2 * k <= 2 * order - 1; ++k) {
        expect *= (2.0 * k - 1.0) / 2.0;
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            acc += rule.weights[i] * std::pow(rule.nodes[i], 2 * k);
        CHECK(acc == doctest::Approx(expect).epsilon(1e-11));
    }
}

TEST_CASE("nodes are symmetric about the origin") {
    const auto rule = gauss_hermite(11);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        CHECK(std::abs(rule.nodes[i] + rule.nodes[rule.nodes.size() - 1 - i]) <
              1e-12);
    CHECK_THROWS(gauss_hermite(2));
}

TEST_CASE("gaussian_average reproduces analytic Gaussian expectations") {
    // E[cos(theta)] = exp(-s^2/2) for theta ~ Normal(0, s^2)
    for (double s : {0.2, 0.5, 1.0}) {
        const double got = gaussian_average(s, 21, [](double t) { return std::cos(t); });
        CHECK(got == doctest::Approx(std::exp(-s * s / 2.0)).epsilon(1e-12));
    }
    // E[theta^2] = s^2
    const double m2 = gaussian_average(0.7, 15, [](double t) { return t * t; });
    CHECK(m2 == doctest::Approx(0.49).epsilon(1e-12));
    // s = 0 evaluates the integrand once at zero, exactly
    CHECK(gaussian_average(0.0, 15, [](double t) { return t + 3.0; }) == 3.0);
}

TEST_CASE("order doubling is stable") {
    for (double s : {0.3, 0.5}) {
        const double a =
            gaussian_average(s, 15, [](double t) { return std::cos(t) * std::cos(t); });
        const double b =
            gaussian_average(s, 30, [](double t) { return std::cos(t) * std::cos(t); });
        CHECK(std::abs(a - b) < 1e-6);
    }
}
