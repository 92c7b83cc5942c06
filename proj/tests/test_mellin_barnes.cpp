#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fdrlos/mathutil.hpp"
#include "fdrlos/specfun/gamma_fns.hpp"
#include "fdrlos/specfun/kummer.hpp"
#include "fdrlos/specfun/mellin_barnes.hpp"
#include "reference_values.hpp"

using namespace fdrlos;

namespace {

// G^{2,1}_{1,2}((1-m); (i,1) | z), the large-SNR series kernel.
MeijerGSpec gt_spec(double m, double i) {
    MeijerGSpec s;
    s.a_front = {1.0 - m};
    s.b_front = {i, 1.0};
    return s;
}

}  // namespace

TEST_SUITE("mellin_barnes") {

TEST_CASE("logarithm identity") {
    // G^{1,2}_{2,2}((1,1); (1),(0) | z) = ln(1+z)
    MeijerGSpec s;
    s.a_front = {1.0, 1.0};
    s.b_front = {1.0};
    s.b_back = {0.0};
    for (double z : {0.1, 0.7, 3.0, 40.0})
        CHECK(meijer_g(s, z) == doctest::Approx(std::log1p(z)).epsilon(1e-8));
    CHECK(meijer_g(s, 0.7) == doctest::Approx(refs::kLn1p7).epsilon(1e-10));
}

TEST_CASE("exponential identity") {
    // G^{1,0}_{0,1}(-; (0) | z) = e^-z
    MeijerGSpec s;
    s.b_front = {0.0};
    for (double z : {0.3, 1.3, 6.0})
        CHECK(meijer_g(s, z) == doctest::Approx(std::exp(-z)).epsilon(1e-10));
}

TEST_CASE("series kernel against pinned values") {
    for (const auto& r : refs::kGt) {
        ContourResult res = meijer_g_ex(gt_spec(r.m, r.i), r.z);
        CHECK(res.value == doctest::Approx(r.value).epsilon(1e-9));
        CHECK(res.converged);
        CHECK(std::abs(res.value - r.value) <= 50.0 * res.err_est + 1e-12);
    }
}

TEST_CASE("series kernel equals the Kummer-U route") {
    // G^{2,1}_{1,2}((1-m); (i,1) | z) = z^i Gamma(m+i) Gamma(m+1) U(m+i, i, z)
    for (const auto& r : refs::kGt) {
        const double u = std::pow(r.z, r.i) *
                         std::exp(ln_gamma(r.m + r.i) + ln_gamma(r.m + 1.0)) *
                         kummer_u(r.m + r.i, r.i, r.z);
        CHECK(u == doctest::Approx(r.value).epsilon(1e-9));
    }
}

TEST_CASE("argument-power shift identity") {
    // z^alpha G((a); (b) | z) = G((a+alpha); (b+alpha) | z)
    const double alpha = 0.3, z = 0.4, m = 2.5, i = 1.0;
    MeijerGSpec base = gt_spec(m, i);
    MeijerGSpec shifted;
    shifted.a_front = {1.0 - m + alpha};
    shifted.b_front = {i + alpha, 1.0 + alpha};
    CHECK(std::pow(z, alpha) * meijer_g(base, z) ==
          doctest::Approx(meijer_g(shifted, z)).epsilon(1e-9));
}

TEST_CASE("argument inversion identity") {
    // G^{m,n}_{p,q}((a); (b) | 1/z) = G^{n,m}_{q,p}((1-b); (1-a) | z)
    const double m = 2.0, i = 1.0, z = 0.4;
    MeijerGSpec inv;
    inv.a_front = {1.0 - i, 0.0};   // 1 - b_front
    inv.b_front = {m};              // 1 - a_front
    CHECK(meijer_g(gt_spec(m, i), 1.0 / z) ==
          doctest::Approx(meijer_g(inv, z)).epsilon(1e-9));
}

TEST_CASE("summation rule") {
    // sum_i G^{2,1}_{1,2}((1-m); (i,1) | z) / i! = Gamma(m).  The terms decay
    // only algebraically (~1/i^2), so the partial sums carry a ~C/N deficit;
    // extrapolating in 1/N removes it and pins the limit to ~1e-6.
    for (double m : {2.0, 2.5}) {
        const double z = 0.25;
        double s30 = 0.0, s60 = 0.0, s120 = 0.0;
        double sum = 0.0, fact = 1.0;
        for (int i = 0; i <= 120; ++i) {
            if (i > 0) fact *= i;
            sum += meijer_g(gt_spec(m, i), z) / fact;
            if (i == 30) s30 = sum;
            if (i == 60) s60 = sum;
            if (i == 120) s120 = sum;
        }
        const double target = (m == 2.0) ? 1.0 : refs::kGamma2p5;
        // raw partials approach the limit from below
        CHECK(s30 < s60);
        CHECK(s60 < s120);
        CHECK(s120 < target);
        // two-level Richardson: first sweep cancels the 1/N deficit, second
        // the 1/N^2 remainder
        const double a30 = 2.0 * s60 - s30;
        const double a60 = 2.0 * s120 - s60;
        const double extrapolated = (4.0 * a60 - a30) / 3.0;
        CHECK(extrapolated == doctest::Approx(target).epsilon(5e-5));
    }
}

TEST_CASE("tightening the tolerance does not move the value") {
    ContourConfig loose, tight;
    loose.tol = 1e-6;
    tight.tol = 1e-11;
    MeijerGSpec s = gt_spec(2.0, 1.0);
    ContourResult rl = meijer_g_ex(s, 0.4, loose);
    ContourResult rt = meijer_g_ex(s, 0.4, tight);
    CHECK(std::abs(rl.value - rt.value) <= rl.err_est + rt.err_est + 1e-12);
    CHECK(rt.err_est <= rl.err_est + 1e-15);
}

TEST_CASE("infeasible contours are rejected") {
    // pole families overlap: no vertical line separates them
    MeijerGSpec bad;
    bad.a_front = {1.2};
    bad.b_front = {-1.6};
    CHECK_THROWS_AS(meijer_g(bad, 0.5), contour_infeasible);

    // a_front - b_front a positive integer: families collide exactly
    MeijerGSpec collide;
    collide.a_front = {1.0};
    collide.b_front = {-2.0};
    CHECK_THROWS_AS(collide.validate(), contour_infeasible);
}

TEST_CASE("non-decaying integrands are rejected") {
    // Gamma(1+tau)/Gamma(0.5+tau) grows like |tau|^{1/2} along the line
    GammaBlock blk;
    blk.lf = {1.0};
    blk.ub = {0.5};
    ContourConfig cfg;
    cfg.sigma = 0.0;
    CHECK_THROWS_AS(mb_line(blk, 1.0, cfg), divergent_settings);
}

TEST_CASE("contour settings are validated") {
    ContourConfig c;
    c.nodes = 16;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = ContourConfig{};
    c.tol = 0.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    CHECK_THROWS_AS(mb_line(GammaBlock{}, -1.0, ContourConfig{}), std::domain_error);
}

TEST_CASE("separable double contour matches the product of lines") {
    // with block1 empty the double integral factorizes:
    // G^{1,0}_{0,1}(-;(0)|x) * G^{2,1}_{1,2}((1-m);(i,1)|y)
    EgbmgSpec spec;
    spec.block2.b_front = {0.0};
    spec.block3 = gt_spec(2.0, 1.0);
    ContourConfig cs, ct;
    cs.sigma = 0.5;    // block2 gap is (0, inf)
    ct.sigma = -0.25;  // block3 gap is (-1, 2)
    const double x = 1.3, y = 0.4;
    MeijerGSpec e;
    e.b_front = {0.0};
    const double expected = meijer_g(e, x) * meijer_g(gt_spec(2.0, 1.0), y);
    ContourResult r = egbmg_ex(spec, x, y, cs, ct);
    CHECK(r.value == doctest::Approx(expected).epsilon(1e-7));
}

}  // TEST_SUITE
