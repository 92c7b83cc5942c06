#pragma once

#include <span>

namespace fdrlos {

enum class AccelMethod { shanks, richardson };

struct AccelResult {
    double value = 0.0;
    double stability = 0.0;  // |last transform - previous transform|
    bool degenerate = false; // denominator collapse -> fell back to last sum
};

// Limit estimate from a sequence of partial sums (at least 3).
// shanks: iterated Aitken delta-squared on the trailing window (up to 7 sums).
// richardson: polynomial extrapolation in 1/n to n -> inf.
AccelResult accelerate(std::span<const double> partial_sums, AccelMethod method);

}  // namespace fdrlos
