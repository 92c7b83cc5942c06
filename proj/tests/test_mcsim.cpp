#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fdrlos/capacity.hpp"
#include "fdrlos/mcsim.hpp"

using namespace fdrlos;

TEST_SUITE("mcsim") {

TEST_CASE("config validation") {
    McConfig c;
    CHECK_NOTHROW(c.validate());
    c.samples = 100;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = McConfig{};
    c.streams = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = McConfig{};
    c.batch = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("result is bit-identical across stream counts") {
    ChannelParams p{20.0, 2.0, 10.0};
    McConfig c;
    c.samples = 300000;
    c.seed = 9;
    c.streams = 1;
    McResult r1 = mc_ora(p, c);
    c.streams = 4;
    McResult r4 = mc_ora(p, c);
    c.streams = 16;
    McResult r16 = mc_ora(p, c);
    CHECK(r1.mean == r4.mean);
    CHECK(r4.mean == r16.mean);
    CHECK(r1.std_err == r16.std_err);
    CHECK(r1.samples_used == 300000);
}

TEST_CASE("same seed reproduces, different seed does not") {
    ChannelParams p{0.5, 1.0, 10.0};
    McConfig c;
    c.samples = 100000;
    c.seed = 3;
    McResult a = mc_ora(p, c);
    McResult b = mc_ora(p, c);
    CHECK(a.mean == b.mean);
    c.seed = 4;
    CHECK(a.mean != mc_ora(p, c).mean);
}

TEST_CASE("estimates agree with quadrature within three standard errors") {
    for (ChannelParams p : {ChannelParams{20.0, 2.0, 10.0}, ChannelParams{0.5, 4.0, 100.0},
                            ChannelParams{0.01, 2.0, 1.0}}) {
        McConfig c;
        c.samples = 400000;
        c.seed = 1;
        c.streams = 4;
        McResult mc = mc_ora(p, c);
        const double exact = ora_quadrature(p).value;
        CHECK(std::abs(mc.mean - exact) < 3.0 * mc.std_err);

        OpraCutoff cut = opra_cutoff(p);
        McResult mo = mc_opra(p, cut.gamma0, c);
        const double oexact = opra_quadrature(p, cut).value;
        CHECK(std::abs(mo.mean - oexact) < 3.0 * mo.std_err);
    }
}

TEST_CASE("standard error shrinks like the square root of the sample count") {
    ChannelParams p{20.0, 2.0, 10.0};
    McConfig c;
    c.seed = 2;
    c.samples = 100000;
    McResult small = mc_ora(p, c);
    c.samples = 1600000;
    McResult large = mc_ora(p, c);
    const double ratio = small.std_err / large.std_err;
    CHECK(ratio > 3.0);  // ideal: 4
    CHECK(ratio < 5.0);
}

TEST_CASE("power constraint closes at the solved cutoff") {
    ChannelParams p{20.0, 2.0, 10.0};
    OpraCutoff cut = opra_cutoff(p);
    McConfig c;
    c.samples = 1000000;
    c.seed = 5;
    c.streams = 4;
    // E[1/gamma0 - 1/gamma ; gamma >= gamma0] = 1 at the correct cutoff
    McResult r = mc_constraint(p, cut.gamma0, c);
    CHECK(std::abs(r.mean - 1.0) < 3.0 * r.std_err);
    // and the residual moves the right way on either side of the solution
    CHECK(mc_constraint(p, 0.5 * cut.gamma0, c).mean > r.mean);
    CHECK(mc_constraint(p, std::min(1.0, 1.2 * cut.gamma0), c).mean < r.mean);
}

TEST_CASE("rate adaptation estimates are ordered") {
    ChannelParams p{0.5, 1.0, 10.0};
    OpraCutoff cut = opra_cutoff(p);
    McConfig c;
    c.samples = 200000;
    c.seed = 6;
    CHECK(mc_opra(p, cut.gamma0, c).mean >= mc_ora(p, c).mean - 0.02);
}

TEST_CASE("invalid cutoff is rejected") {
    ChannelParams p{0.5, 1.0, 10.0};
    McConfig c;
    CHECK_THROWS_AS(mc_opra(p, 0.0, c), std::invalid_argument);
    CHECK_THROWS_AS(mc_constraint(p, -1.0, c), std::invalid_argument);
}

}  // TEST_SUITE
