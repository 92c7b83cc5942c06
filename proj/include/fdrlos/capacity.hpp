#pragma once

// Ergodic capacity of the fading model under two adaptation policies:
//   ORA  - constant power, rate adapted to the instantaneous SNR
//   OPRA - power and rate adapted jointly subject to a mean power constraint
// Each policy has a reference quadrature evaluator, exact contour-integral
// closed forms, regime approximations and a large-SNR expansion.  All
// functions are pure and safe to call concurrently.

#include <string>

#include "fdrlos/channel.hpp"
#include "fdrlos/quadrature.hpp"

namespace fdrlos {

enum class Method {
    quadrature,
    closed_form,
    approx_low_ratio,
    approx_high_ratio,
    high_snr,
    monte_carlo,
};
const char* to_string(Method m);

struct CapacityEstimate {
    double value = 0.0;  // bits/s/Hz
    Method method = Method::quadrature;
    double err_est = 0.0;
    std::string diagnostics;
};

// OPRA cutoff SNR: transmission stops below gamma0.  The mean power
// constraint pins gamma0 in (0, 1]; it approaches 1 as the mean SNR grows.
struct OpraCutoff {
    double gamma0 = 1.0;
    double residual = 0.0;  // power-constraint residual at gamma0
};

struct NumericsConfig {
    QuadratureGrid grid{};
    double contour_tol = 1e-9;  // relative target for contour refinement
    double series_tol = 1e-10;  // term cutoff for series evaluations
    int opra_n_max = 64;        // term cap for the OPRA series form
    double cutoff_tol = 1e-10;  // residual target for the cutoff solve
};

// --- ORA ---

// Reference: conditional capacity integral per LoS-conditioning node, then the
// exponentially weighted outer average (adaptive head plus shifted Laguerre
// tail, order doubled until settled).
CapacityEstimate ora_quadrature(const ChannelParams& p, const NumericsConfig& cfg = {});

// Capacity conditioned on the LoS mixing variable x.  Dispatches between an
// integer-order finite sum and the general-order double contour; orders within
// 1e-6 of an integer are snapped.
CapacityEstimate ora_conditional_closed(const ChannelParams& p, double x,
                                        const NumericsConfig& cfg = {});

// Exact closed form valid for any fluctuation order m >= 0.5 (requires k > 0).
CapacityEstimate ora_closed(const ChannelParams& p, const NumericsConfig& cfg = {});

// Exact closed form specialized to integer m (finite sum of double contours).
CapacityEstimate ora_closed_integer(const ChannelParams& p,
                                    const NumericsConfig& cfg = {});

// Two-term expansion for small dominant-to-scattered power ratio k.
CapacityEstimate ora_approx_low_ratio(const ChannelParams& p,
                                      const NumericsConfig& cfg = {});

// Expansion for large k, integer m.  n_terms inner terms; n_terms == 0 selects
// the single-term simplified variant with the resummed weight.
CapacityEstimate ora_approx_high_ratio(const ChannelParams& p, int n_terms,
                                       const NumericsConfig& cfg = {});

// Large-SNR expansion; certified for k/m < 1 (flagged otherwise).
CapacityEstimate ora_high_snr(const ChannelParams& p, double series_tol = 1e-10);

// Same series with the coefficient normalization switched: extra_factorial
// divides each term by an additional i!.  Kept for cross-checks; the
// single-factorial form (extra_factorial = false) is the correct one.
CapacityEstimate ora_high_snr_variant(const ChannelParams& p, bool extra_factorial,
                                      double series_tol = 1e-10);

// --- OPRA ---

// Solves the mean power constraint for the cutoff.  Probes a fixed grid first
// (monotonicity check and bracket), then Brent until |residual| <= tol.
OpraCutoff opra_cutoff(const ChannelParams& p, const QuadratureGrid& grid = {},
                       double tol = 1e-10);

CapacityEstimate opra_quadrature(const ChannelParams& p, const OpraCutoff& cutoff,
                                 const NumericsConfig& cfg = {});
CapacityEstimate opra_quadrature(const ChannelParams& p, const NumericsConfig& cfg = {});

// Exact closed form for any m >= 0.5 (requires k > 0).
CapacityEstimate opra_closed(const ChannelParams& p, const OpraCutoff& cutoff,
                             const NumericsConfig& cfg = {});
CapacityEstimate opra_closed(const ChannelParams& p, const NumericsConfig& cfg = {});

// Series form (one double contour per term, Shanks-accelerated partial sums).
// Converges quickly for moderate k; the collapsed opra_closed form is the
// primary evaluator.
CapacityEstimate opra_closed_series(const ChannelParams& p, const OpraCutoff& cutoff,
                                    int n_max = 64, double tol = 1e-10);

CapacityEstimate opra_high_snr(const ChannelParams& p, const OpraCutoff& cutoff,
                               double series_tol = 1e-10);
CapacityEstimate opra_high_snr(const ChannelParams& p, double series_tol = 1e-10);

// |exact - approx| / exact; the reference (first argument) must be positive.
double relative_error(double exact, double approx);
double relative_error(const CapacityEstimate& exact, const CapacityEstimate& approx);

}  // namespace fdrlos
