#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "fdrlos/channel.hpp"
#include "fdrlos/quadrature.hpp"

using namespace fdrlos;

TEST_SUITE("channel") {

TEST_CASE("parameter validation") {
    ChannelParams p;
    CHECK_NOTHROW(p.validate());
    p.k = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ChannelParams{};
    p.m = 0.3;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ChannelParams{};
    p.gamma_bar = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("conditional density normalizes and has the stated mean") {
    ChannelParams p{2.0, 1.5, 5.0};
    for (double x : {0.2, 1.0, 3.7}) {
        auto f = [&](double g) { return conditional_pdf(p, g, x); };
        auto gf = [&](double g) { return g * conditional_pdf(p, g, x); };
        const double scale = p.gamma_bar * (p.k + x) / (p.k + 1.0);
        IntegralResult norm = integrate_semi_inf(f, 0.0, scale);
        IntegralResult mean = integrate_semi_inf(gf, 0.0, scale);
        CHECK(norm.value == doctest::Approx(1.0).epsilon(1e-8));
        // conditioned on the fluctuation, the mean SNR is (k+x) gb / (k+1)
        CHECK(mean.value == doctest::Approx(scale).epsilon(1e-7));
    }
}

TEST_CASE("conditional density rejects degenerate inputs") {
    ChannelParams p{2.0, 1.5, 5.0};
    CHECK_THROWS_AS(conditional_pdf(p, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(conditional_pdf(p, 1.0, -1.0), std::domain_error);
    CHECK_THROWS_AS(conditional_pdf(p, -0.5, 1.0), std::domain_error);
}

TEST_CASE("marginal density normalizes with unit mean SNR scale") {
    for (ChannelParams p : {ChannelParams{2.0, 1.5, 5.0}, ChannelParams{20.0, 2.0, 10.0},
                            ChannelParams{0.01, 4.0, 1.0}}) {
        auto f = [&](double g) { return marginal_pdf(p, g); };
        auto gf = [&](double g) { return g * marginal_pdf(p, g); };
        IntegralResult norm = integrate_semi_inf(f, 0.0, p.gamma_bar);
        IntegralResult mean = integrate_semi_inf(gf, 0.0, 2.0 * p.gamma_bar);
        CHECK(std::abs(norm.value - 1.0) < 1e-6);
        CHECK(std::abs(mean.value / p.gamma_bar - 1.0) < 1e-4);
    }
}

TEST_CASE("marginal density reports convergence") {
    ChannelParams p{20.0, 2.0, 10.0};
    MarginalPdfResult r = marginal_pdf_ex(p, 8.0);
    CHECK(r.converged);
    CHECK(r.value > 0.0);
    CHECK_THROWS_AS(marginal_pdf(p, -1.0), std::domain_error);
}

TEST_CASE("sampler is reproducible and seed-sensitive") {
    ChannelParams p{20.0, 2.0, 10.0};
    std::mt19937_64 a(42), b(42), c(43);
    const double va = sample_snr(p, a);
    CHECK(va == sample_snr(p, b));
    CHECK(va != sample_snr(p, c));
}

TEST_CASE("sampler mean matches the nominal SNR") {
    // k = 0 degenerates to the pure double-scatter product channel
    for (ChannelParams p : {ChannelParams{0.0, 1.0, 4.0}, ChannelParams{20.0, 2.0, 10.0}}) {
        std::mt19937_64 rng(7);
        const int n = 400000;
        double sum = 0.0, sumsq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double g = sample_snr(p, rng);
            sum += g;
            sumsq += g * g;
        }
        const double mean = sum / n;
        const double var = sumsq / n - mean * mean;
        const double se = std::sqrt(var / n);
        CHECK(std::abs(mean - p.gamma_bar) < 4.0 * se);
    }
}

TEST_CASE("larger fluctuation order means milder SNR spread") {
    // sample variance of gamma/gamma_bar shrinks monotonically toward the
    // no-fluctuation limit as m grows
    auto spread = [](double m) {
        ChannelParams p{20.0, m, 1.0};
        std::mt19937_64 rng(11);
        const int n = 200000;
        double sum = 0.0, sumsq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double g = sample_snr(p, rng);
            sum += g;
            sumsq += g * g;
        }
        const double mean = sum / n;
        return sumsq / n - mean * mean;
    };
    const double v5 = spread(5.0);
    const double v500 = spread(500.0);
    CHECK(v5 > 1.02 * v500);
}

TEST_CASE("density mass tracks the sampler") {
    // P(gamma <= q) from the density vs the empirical fraction
    ChannelParams p{2.0, 1.5, 5.0};
    const double q = 4.0;
    auto f = [&](double g) { return marginal_pdf(p, g); };
    IntegralResult cdf = integrate(f, 0.0, q, 1e-9, 1e-9);
    std::mt19937_64 rng(5);
    const int n = 200000;
    int hits = 0;
    for (int i = 0; i < n; ++i)
        if (sample_snr(p, rng) <= q) ++hits;
    const double frac = static_cast<double>(hits) / n;
    const double se = std::sqrt(frac * (1.0 - frac) / n);
    CHECK(std::abs(cdf.value - frac) < 4.0 * se);
}

}  // TEST_SUITE
