#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wwrcva/quad.hpp"
#include "wwrcva/types.hpp"

using namespace wwrcva;

TEST_CASE("adaptive simpson on smooth integrands") {
    CHECK(adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) ==
          doctest::Approx(2.0).epsilon(1e-10));
    CHECK(adaptive_simpson([](double x) { return std::exp(-x); }, 0.0, 3.0) ==
          doctest::Approx(1.0 - std::exp(-3.0)).epsilon(1e-12));
}

TEST_CASE("adaptive simpson handles degenerate and reversed ranges") {
    CHECK(adaptive_simpson([](double) { return 7.0; }, 2.0, 2.0) == 0.0);
    CHECK(adaptive_simpson([](double x) { return x; }, 1.0, 0.0) ==
          doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("adaptive simpson reports non-convergence") {
    // a needle the sampler cannot resolve within the recursion budget
    auto needle = [](double x) { return x == 0.0 ? 0.0 : std::sin(1.0 / x) / x; };
    CHECK_THROWS_AS(adaptive_simpson(needle, 1e-9, 1.0, 1e-15, 1e-14, 8), NumericsError);
}

TEST_CASE("gauss laguerre rules integrate polynomials exactly") {
    const auto& rule = gauss_laguerre(8);
    double s0 = 0.0, s1 = 0.0, s4 = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        s0 += rule.weights[i];
        s1 += rule.weights[i] * rule.nodes[i];
        s4 += rule.weights[i] * std::pow(rule.nodes[i], 4);
    }
    CHECK(s0 == doctest::Approx(1.0).epsilon(1e-13));   // Gamma(1)
    CHECK(s1 == doctest::Approx(1.0).epsilon(1e-13));   // Gamma(2)
    CHECK(s4 == doctest::Approx(24.0).epsilon(1e-12));  // Gamma(5)
}

TEST_CASE("escalated laguerre quadrature: exponential-weight integrals") {
    CHECK(gauss_laguerre_escalated([](double) { return 1.0; }, 1e-12) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // int e^{-z} sin z dz = 1/2
    CHECK(gauss_laguerre_escalated([](double z) { return std::sin(z); }, 1e-10) ==
          doctest::Approx(0.5).epsilon(1e-9));
    // int e^{-z} / (1 + z) dz = e E_1(1)
    CHECK(gauss_laguerre_escalated([](double z) { return 1.0 / (1.0 + z); }, 1e-10) ==
          doctest::Approx(0.59634736232319407).epsilon(1e-8));
}
