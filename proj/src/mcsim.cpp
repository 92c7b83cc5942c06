#include "fdrlos/mcsim.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace fdrlos {

void McConfig::validate() const {
    if (samples < 1000) throw std::invalid_argument("McConfig: samples must be >= 1000");
    if (streams < 1) throw std::invalid_argument("McConfig: streams must be >= 1");
    if (batch < 1) throw std::invalid_argument("McConfig: batch must be >= 1");
}

namespace {

struct BatchMoments {
    double sum = 0.0;
    double sumsq = 0.0;
    long long n = 0;
};

// Runs fn over every sample in deterministic batches.  Batch j always draws
// from an engine seeded by (seed, j), so the merged moments do not depend on
// how batches were assigned to threads.
template <typename Fn>
McResult mc_run(const ChannelParams& p, const McConfig& cfg, Fn fn) {
    p.validate();
    cfg.validate();
    const long long nb = (cfg.samples + cfg.batch - 1) / cfg.batch;
    std::vector<BatchMoments> parts((std::size_t)nb);

    auto run_batch = [&](long long j) {
        std::seed_seq sq{(std::uint32_t)cfg.seed, (std::uint32_t)(cfg.seed >> 32),
                         (std::uint32_t)j, (std::uint32_t)((std::uint64_t)j >> 32)};
        std::mt19937_64 rng(sq);
        const long long lo = j * cfg.batch;
        const long long hi = std::min(cfg.samples, lo + cfg.batch);
        BatchMoments bm;
        for (long long i = lo; i < hi; ++i) {
            const double g = sample_snr(p, rng);
            const double v = fn(g);
            bm.sum += v;
            bm.sumsq += v * v;
        }
        bm.n = hi - lo;
        parts[(std::size_t)j] = bm;
    };

    const int workers = (int)std::min<long long>(cfg.streams, nb);
    if (workers <= 1) {
        for (long long j = 0; j < nb; ++j) run_batch(j);
    } else {
        std::atomic<long long> next{0};
        std::vector<std::thread> pool;
        pool.reserve((std::size_t)workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const long long j = next.fetch_add(1);
                    if (j >= nb) return;
                    run_batch(j);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    BatchMoments tot;
    for (const auto& bm : parts) {  // fixed ascending merge order
        tot.sum += bm.sum;
        tot.sumsq += bm.sumsq;
        tot.n += bm.n;
    }

    McResult r;
    r.samples_used = tot.n;
    r.mean = tot.sum / (double)tot.n;
    const double var = std::max(0.0, (tot.sumsq - (double)tot.n * r.mean * r.mean) / (double)(tot.n - 1));
    r.std_err = std::sqrt(var / (double)tot.n);
    return r;
}

}  // namespace

McResult mc_ora(const ChannelParams& p, const McConfig& cfg) {
    return mc_run(p, cfg, [](double g) { return std::log2(1.0 + g); });
}

McResult mc_opra(const ChannelParams& p, double gamma0, const McConfig& cfg) {
    if (!(gamma0 > 0.0)) throw std::invalid_argument("mc_opra: gamma0 must be positive");
    return mc_run(p, cfg, [gamma0](double g) { return g >= gamma0 ? std::log2(g / gamma0) : 0.0; });
}

McResult mc_constraint(const ChannelParams& p, double gamma0, const McConfig& cfg) {
    if (!(gamma0 > 0.0)) throw std::invalid_argument("mc_constraint: gamma0 must be positive");
    return mc_run(p, cfg, [gamma0](double g) { return g >= gamma0 ? 1.0 / gamma0 - 1.0 / g : 0.0; });
}

}  // namespace fdrlos
