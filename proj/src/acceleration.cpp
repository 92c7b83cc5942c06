#include "fdrlos/specfun/acceleration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fdrlos {

namespace {

// One Aitken pass; returns true if every denominator was usable.
bool shanks_pass(const std::vector<double>& s, std::vector<double>& out) {
    out.clear();
    for (size_t i = 0; i + 2 < s.size(); ++i) {
        const double d1 = s[i + 1] - s[i];
        const double d2 = s[i + 2] - s[i + 1];
        const double den = d2 - d1;
        const double floor_ = 1e-14 * (std::abs(s[i + 2]) + std::abs(d1) + std::abs(d2));
        if (std::abs(den) <= floor_) return false;
        out.push_back(s[i + 2] - d2 * d2 / den);
    }
    return true;
}

}  // namespace

AccelResult accelerate(std::span<const double> partial_sums, AccelMethod method) {
    if (partial_sums.size() < 3)
        throw std::invalid_argument("accelerate: need at least 3 partial sums");

    AccelResult res;
    if (method == AccelMethod::shanks) {
        // trailing window of at most 7 sums
        const size_t n = partial_sums.size();
        const size_t w = std::min<size_t>(7, n);
        std::vector<double> cur(partial_sums.begin() + (n - w), partial_sums.end());
        double prev_best = cur.back();
        while (cur.size() >= 3) {
            std::vector<double> next;
            if (!shanks_pass(cur, next)) {
                res.degenerate = true;
                res.value = cur.back();
                res.stability = std::abs(cur.back() - prev_best);
                return res;
            }
            res.stability = std::abs(next.back() - cur.back());
            prev_best = cur.back();
            cur = std::move(next);
        }
        res.value = cur.back();
        return res;
    }

    // richardson: Neville table in h = 1/n, extrapolated to h = 0.
    const size_t n = partial_sums.size();
    const size_t w = std::min<size_t>(10, n);
    std::vector<double> t(partial_sums.begin() + (n - w), partial_sums.end());
    std::vector<double> h(w);
    for (size_t i = 0; i < w; ++i)
        h[i] = 1.0 / static_cast<double>(n - w + 1 + i);
    double prev = t.back();
    for (size_t level = 1; level < w; ++level) {
        for (size_t i = 0; i + level < w; ++i) {
            const double den = h[i] - h[i + level];
            if (std::abs(den) < 1e-300) {
                res.degenerate = true;
                res.value = partial_sums.back();
                return res;
            }
            t[i] = t[i + 1] + (t[i + 1] - t[i]) * h[i + level] / den;
        }
        res.stability = std::abs(t[0] - prev);
        prev = t[0];
    }
    res.value = t[0];
    return res;
}

}  // namespace fdrlos
