#pragma once

// Monte-Carlo capacity estimators drawing physical channel samples.  Work is
// split into fixed-size batches; batch j is generated by its own engine
// seeded from (seed, j), and batches are merged in ascending order, so the
// result is bit-identical for any worker-stream count.

#include <cstdint>

#include "fdrlos/channel.hpp"

namespace fdrlos {

struct McConfig {
    long long samples = 1000000;
    std::uint64_t seed = 1;
    int streams = 1;          // worker threads; does not affect the result
    long long batch = 65536;  // samples per substream batch
    void validate() const;    // samples >= 1000, streams >= 1, batch >= 1
};

struct McResult {
    double mean = 0.0;
    double std_err = 0.0;  // sample stddev / sqrt(samples_used)
    long long samples_used = 0;
};

// Mean of log2(1 + gamma).
McResult mc_ora(const ChannelParams& p, const McConfig& cfg);

// Mean of log2(gamma/gamma0) over samples at or above the cutoff.
McResult mc_opra(const ChannelParams& p, double gamma0, const McConfig& cfg);

// Mean of the power weight (1/gamma0 - 1/gamma) over samples at or above the
// cutoff; approximately 1 when gamma0 solves the mean power constraint.
McResult mc_constraint(const ChannelParams& p, double gamma0, const McConfig& cfg);

}  // namespace fdrlos
