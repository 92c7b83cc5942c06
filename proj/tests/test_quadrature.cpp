#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fdrlos/quadrature.hpp"

using namespace fdrlos;

TEST_SUITE("quadrature") {

TEST_CASE("gk15 integrates low-degree polynomials exactly") {
    // The embedded 7-point Gauss rule is exact through degree 13,
    // the Kronrod extension through degree 22.
    auto poly = [](double x) {
        double p = 1.0, s = 0.0;
        for (int j = 0; j <= 13; ++j) {
            s += p / (j + 2.0);
            p *= x;
        }
        return s;
    };
    IntegralResult r = gk15(poly, -1.0, 2.0);
    double exact = 0.0;
    for (int j = 0; j <= 13; ++j) {
        const double c = 1.0 / ((j + 2.0) * (j + 1.0));
        exact += c * (std::pow(2.0, j + 1.0) - std::pow(-1.0, j + 1.0));
    }
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-14));
    CHECK(r.evals == 15);
}

TEST_CASE("adaptive integrate reaches requested accuracy on a peaked integrand") {
    // int_0^1 1/sqrt(x) dx = 2, integrable singularity at the left edge
    auto f = [](double x) { return x > 0.0 ? 1.0 / std::sqrt(x) : 0.0; };
    IntegralResult r = integrate(f, 0.0, 1.0, 1e-9, 1e-9);
    CHECK(std::abs(r.value - 2.0) < 1e-6);

    auto bump = [](double x) { return std::exp(-200.0 * (x - 0.5) * (x - 0.5)); };
    IntegralResult rb = integrate(bump, 0.0, 1.0, 1e-12, 1e-12);
    const double exact = 0.12533141373155002;  // sqrt(pi/200); outside tails ~ e^-50
    CHECK(rb.value == doctest::Approx(exact).epsilon(1e-10));
    CHECK(rb.converged);
    CHECK(std::abs(rb.value - exact) <= 10.0 * rb.err_est + 1e-13);
}

TEST_CASE("adaptive integrate terminates on unattainable tolerance") {
    auto f = [](double x) { return std::exp(-x) / ((1.0 + 2.0 * x) * (1.0 + 2.0 * x)); };
    IntegralResult r = integrate(f, 0.0, 44.0, 1e-300, 1e-300);
    CHECK(r.evals < 2000000);
    CHECK(r.value == doctest::Approx(0.2692723418790674).epsilon(1e-9));
}

TEST_CASE("semi-infinite integration handles slow exponential tails") {
    // int_0^inf e^{-x/8} cos(x) dx = (1/8) / (1/64 + 1)
    auto f = [](double x) { return std::exp(-x / 8.0) * std::cos(x); };
    IntegralResult r = integrate_semi_inf(f, 0.0, 8.0);
    const double exact = 0.125 / (0.125 * 0.125 + 1.0);
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("Laguerre rule reproduces exponential moments") {
    for (int n : {32, 96, 192}) {
        LaguerreRule rule = laguerre_rule(n);
        REQUIRE(rule.nodes.size() == static_cast<size_t>(n));
        double m0 = 0.0, m1 = 0.0, m3 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = rule.nodes[i], w = rule.weights[i];
            m0 += w;
            m1 += w * x;
            m3 += w * x * x * x;
        }
        CHECK(m0 == doctest::Approx(1.0).epsilon(1e-12));   // 0! = 1
        CHECK(m1 == doctest::Approx(1.0).epsilon(1e-12));   // 1! = 1
        CHECK(m3 == doctest::Approx(6.0).epsilon(1e-11));   // 3! = 6
    }
}

TEST_CASE("Laguerre nodes are ascending and weights positive") {
    LaguerreRule rule = laguerre_rule(96);
    for (size_t i = 1; i < rule.nodes.size(); ++i)
        CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    // far-tail weights may underflow to zero but must never go negative
    for (double w : rule.weights) CHECK(w >= 0.0);
}

TEST_CASE("grid settings are validated") {
    QuadratureGrid g;
    g.laguerre_order = 8;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g = QuadratureGrid{};
    g.panel_tol = 1e-3;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g = QuadratureGrid{};
    g.max_laguerre_order = 32;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    CHECK_NOTHROW(QuadratureGrid{}.validate());
}

}  // TEST_SUITE
