#pragma once

// Fluctuating double-Rayleigh with line-of-sight fading model.
//
// The received envelope is S = w0*sqrt(xi)*e^{j phi} + w2*G2*G3 where xi is
// Gamma(m, 1/m) (unit mean), G2, G3 are independent unit-power complex normals,
// phi is uniform, w0^2 = k/(1+k), w2^2 = 1/(1+k). The instantaneous SNR is
// gamma = gamma_bar * |S|^2.

#include <complex>
#include <random>

#include "fdrlos/quadrature.hpp"

namespace fdrlos {

struct ChannelParams {
    double k = 1.0;          // dominant-to-scattered power ratio, >= 0
    double m = 1.0;          // LoS fluctuation shape, >= 0.5
    double gamma_bar = 1.0;  // mean SNR (linear), > 0

    void validate() const;
};

// Density of gamma given the LoS fluctuation xi = x.  Throws std::domain_error
// for x <= 0 (the conditional law degenerates) and for gamma < 0.
double conditional_pdf(const ChannelParams& p, double gamma, double x);

struct MarginalPdfResult {
    double value = 0.0;
    double err_est = 0.0;
    bool converged = true;  // false if Laguerre doubling failed to settle
};

// Marginal density of gamma: Gauss-Laguerre average of conditional_pdf over x.
// The order doubles until two successive estimates agree to grid.panel_tol;
// if two doublings are not enough the flag is cleared and the last value kept.
MarginalPdfResult marginal_pdf_ex(const ChannelParams& p, double gamma,
                                  const QuadratureGrid& grid = {});
double marginal_pdf(const ChannelParams& p, double gamma,
                    const QuadratureGrid& grid = {});

// One draw of the instantaneous SNR.  All distribution state is local, so the
// same engine state always yields the same value regardless of call history.
double sample_snr(const ChannelParams& p, std::mt19937_64& rng);

}  // namespace fdrlos
