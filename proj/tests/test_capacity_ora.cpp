#include <cmath>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "fdrlos/capacity.hpp"
#include "fdrlos/mathutil.hpp"
#include "fdrlos/quadrature.hpp"
#include "fdrlos/specfun/exp_integral.hpp"
#include "reference_values.hpp"

using namespace fdrlos;

TEST_SUITE("capacity_ora") {

TEST_CASE("quadrature reproduces the reference table") {
    for (const auto& r : refs::kOra) {
        ChannelParams p{r.k, r.m, r.gb};
        CapacityEstimate e = ora_quadrature(p);
        CHECK_MESSAGE(e.value == doctest::Approx(r.value).epsilon(5e-7),
                      "k=", r.k, " m=", r.m, " gb=", r.gb);
    }
}

TEST_CASE("contour closed form matches the pinned values") {
    // subset spanning integer m, half-integer m, and a generic order
    for (const auto& r : {refs::OraRef{20.0, 1.5, 10.0, 3.051671275161},
                          refs::OraRef{2.0, 3.3, 100.0, 6.082464411134},
                          refs::OraRef{20.0, 2.0, 10.0, 3.13246488579},
                          refs::OraRef{0.5, 4.0, 10.0, 2.801600205623},
                          refs::OraRef{20.0, 0.7, 10.0, 2.744227198768},
                          refs::OraRef{1000.0, 0.5, 10.0, 2.507141347973}}) {
        ChannelParams p{r.k, r.m, r.gb};
        CapacityEstimate e = ora_closed(p);
        CHECK_MESSAGE(e.value == doctest::Approx(r.value).epsilon(5e-7),
                      "k=", r.k, " m=", r.m, " gb=", r.gb);
    }
}

TEST_CASE("integer-order closed form agrees with the general contour") {
    for (const auto& r : {refs::OraRef{20.0, 2.0, 10.0, 0.0},
                          refs::OraRef{0.5, 1.0, 10.0, 0.0},
                          refs::OraRef{200.0, 4.0, 100.0, 0.0}}) {
        ChannelParams p{r.k, r.m, r.gb};
        CapacityEstimate gen = ora_closed(p);
        CapacityEstimate fix = ora_closed_integer(p);
        CHECK(std::abs(gen.value - fix.value) <=
              std::max(1e-6, gen.err_est + fix.err_est));
    }
}

TEST_CASE("integer-order closed form tracks quadrature on the table scenario") {
    for (int j = 0; j < 5; ++j) {
        const double gb = db_to_linear(10.0 * j);
        ChannelParams p20{20.0, 2.0, gb}, p200{200.0, 2.0, gb};
        CHECK(ora_closed_integer(p20).value ==
              doctest::Approx(refs::kTableK20[j]).epsilon(1e-8));
        CHECK(ora_closed_integer(p200).value ==
              doctest::Approx(refs::kTableK200[j]).epsilon(1e-8));
        CHECK(ora_quadrature(p20).value ==
              doctest::Approx(refs::kTableK20[j]).epsilon(1e-6));
    }
}

TEST_CASE("conditional closed form equals the conditional integral") {
    ChannelParams p{3.0, 2.6, 8.0};
    for (double x : {0.4, 1.0, 2.5}) {
        CapacityEstimate c = ora_conditional_closed(p, x);
        auto f = [&](double g) {
            return std::log2(1.0 + g) * conditional_pdf(p, g, x);
        };
        const double scale = p.gamma_bar * (p.k + x) / (p.k + 1.0);
        IntegralResult q = integrate_semi_inf(f, 0.0, scale);
        CHECK(c.value == doctest::Approx(q.value).epsilon(1e-7));
    }
}

TEST_CASE("unit fluctuation order collapses to the exponential-integral form") {
    // at m=1 the fluctuation is exponential and the conditional capacity is
    // e^beta E_1(beta) / ln 2 with beta = (k+1)/((k+x) gb)
    ChannelParams p{2.0, 1.0, 8.0};
    const double x = 1.3;
    const double beta = (p.k + 1.0) / ((p.k + x) * p.gamma_bar);
    const double expect = std::exp(beta) * gen_exp_integral(1.0, beta) / kLn2;
    CHECK(ora_conditional_closed(p, x).value == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("small-ratio expansion degrades gracefully with SNR") {
    ChannelParams p{0.01, 2.0, 1.0};
    double prev = 0.0;
    for (int j = 0; j <= 6; ++j) {
        p.gamma_bar = db_to_linear(5.0 * j);
        const double d =
            relative_error(ora_quadrature(p), ora_approx_low_ratio(p));
        CHECK(d < 0.015);  // holds through 30 dB
        CHECK(d >= prev);  // error grows monotonically with SNR here
        prev = d;
    }
    p.gamma_bar = db_to_linear(40.0);
    const double d40 = relative_error(ora_quadrature(p), ora_approx_low_ratio(p));
    CHECK(d40 < 0.025);  // known growth of the correction term at 40 dB
}

TEST_CASE("small-ratio expansion is exact in the k to 0 limit") {
    ChannelParams p{1e-8, 2.0, 10000.0};
    CHECK(relative_error(ora_quadrature(p), ora_approx_low_ratio(p)) < 1e-6);
}

TEST_CASE("large-ratio expansion accuracy") {
    ChannelParams p{200.0, 2.0, 1.0};
    for (int j = 0; j <= 4; ++j) {
        p.gamma_bar = db_to_linear(10.0 * j);
        CapacityEstimate q = ora_quadrature(p);
        CHECK(relative_error(q, ora_approx_high_ratio(p, 1)) < 0.02);
        CHECK(relative_error(q, ora_approx_high_ratio(p, 3)) < 0.005);
    }
    // pinned spot values
    ChannelParams s{20.0, 2.0, 10.0};
    CHECK(ora_approx_high_ratio(s, 1).value ==
          doctest::Approx(3.31646015012).epsilon(1e-9));
    ChannelParams s2{200.0, 2.0, 10.0};
    CHECK(ora_approx_high_ratio(s2, 3).value ==
          doctest::Approx(3.16240970504).epsilon(1e-9));
}

TEST_CASE("large-ratio sentinel selects the single-term truncation") {
    ChannelParams p{20.0, 2.0, 10.0};
    CapacityEstimate lead = ora_approx_high_ratio(p, 0);
    CapacityEstimate one = ora_approx_high_ratio(p, 1);
    CHECK(lead.value == doctest::Approx(one.value).epsilon(1e-12));
    CHECK(lead.diagnostics.find("simplified") != std::string::npos);
}

TEST_CASE("large-SNR expansion tightens as SNR grows") {
    ChannelParams p{0.5, 2.0, 1.0};
    double prev = 1e9;
    for (double db : {15.0, 20.0, 25.0, 30.0}) {
        p.gamma_bar = db_to_linear(db);
        const double gap =
            std::abs(ora_high_snr(p).value - ora_quadrature(p).value);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 0.05);  // within 0.05 bit/s/Hz by 30 dB
}

TEST_CASE("large-SNR expansion gains one log2(10) per decade") {
    ChannelParams a{0.5, 2.0, 1000.0}, b{0.5, 2.0, 10000.0};
    CHECK(ora_high_snr(b).value - ora_high_snr(a).value ==
          doctest::Approx(std::log2(10.0)).epsilon(1e-12));
}

TEST_CASE("large-SNR series normalization cross-check") {
    // the variant dividing each term by an extra i! must sit further from
    // quadrature than the production normalization
    ChannelParams p{0.5, 2.0, db_to_linear(30.0)};
    const double exact = ora_quadrature(p).value;
    const double good = std::abs(ora_high_snr_variant(p, false).value - exact);
    const double bad = std::abs(ora_high_snr_variant(p, true).value - exact);
    CHECK(good < 0.05);
    CHECK(bad > 10.0 * good);
    CHECK(ora_high_snr_variant(p, false).value ==
          doctest::Approx(ora_high_snr(p).value).epsilon(1e-13));
}

TEST_CASE("large-SNR expansion flags the uncertified region") {
    ChannelParams p{20.0, 2.0, 1000.0};  // k/m = 10 >= 1
    CapacityEstimate e = ora_high_snr(p);
    CHECK(e.diagnostics.find("outside_certified_convergence") != std::string::npos);
    ChannelParams ok{0.5, 2.0, 1000.0};
    CHECK(ora_high_snr(ok).diagnostics.find("outside_certified") == std::string::npos);
}

TEST_CASE("capacity increases with mean SNR") {
    ChannelParams p{3.0, 1.5, 1.0};
    double prev = 0.0;
    for (int j = 0; j <= 4; ++j) {
        p.gamma_bar = db_to_linear(10.0 * j);
        const double c = ora_quadrature(p).value;
        CHECK(c > prev);
        prev = c;
    }
}

TEST_CASE("closed form requires a positive ratio parameter") {
    ChannelParams p{0.0, 2.0, 10.0};
    CHECK_THROWS_AS(ora_closed(p), std::domain_error);
    CHECK_THROWS_AS(ora_closed_integer(p), std::domain_error);
}

TEST_CASE("relative error helper") {
    CHECK(relative_error(2.0, 1.9) == doctest::Approx(0.05));
    CHECK_THROWS_AS(relative_error(0.0, 1.0), std::domain_error);
}

}  // TEST_SUITE
