#pragma once

#include <complex>
#include <limits>
#include <vector>

namespace fdrlos {

// Vertical-line integration settings. sigma = NaN and height = NaN mean
// "choose automatically" (midpoint of the pole gap / decay-based truncation).
struct ContourConfig {
    double sigma = std::numeric_limits<double>::quiet_NaN();
    double height = std::numeric_limits<double>::quiet_NaN();
    int nodes = 512;
    double tol = 1e-9;
    void validate() const;  // nodes >= 64, tol in (0, 1e-3], height > 0 if given
};

// One ratio of gamma products along a line variable tau:
//   Psi(tau) = prod Gamma(b + tau)      for b in lf
//            * prod Gamma(1 - a - tau)  for a in uf
//            / prod Gamma(a + tau)      for a in ub
//            / prod Gamma(1 - b - tau)  for b in lb
// lf carries the left (descending) pole family, uf the right (ascending) one.
struct GammaBlock {
    std::vector<double> lf, uf, ub, lb;
    bool empty() const { return lf.empty() && uf.empty() && ub.empty() && lb.empty(); }
};

std::complex<double> log_psi(const GammaBlock& blk, std::complex<double> tau);

// Open interval of abscissae separating the block's two pole families.
struct PoleGap {
    double left;   // rightmost pole of the lf family (-inf if none)
    double right;  // leftmost pole of the uf family (+inf if none)
    bool feasible() const { return left < right; }
};
PoleGap pole_gap(const GammaBlock& blk);

struct ContourResult {
    double value = 0.0;
    double err_est = 0.0;
    int nodes_used = 0;
    double height_used = 0.0;
    bool converged = true;
};

// (1/2pi) int Psi(sigma + i t) z^{-(sigma+it)} dt over t in [-T, T].
// Raw engine: the caller owns the pole bookkeeping, so deliberately shifted
// contours (with residue corrections added by the caller) are legitimate.
ContourResult mb_line(const GammaBlock& blk, double z, const ContourConfig& cfg);

// (1/2pi)^2 double integral of Psi1(s+t) Psi2(s) Psi3(t) x^{-s} y^{-t}
// over two vertical lines; evaluated on a shared uniform grid so the s+t
// factor reduces to a discrete convolution.
ContourResult mb_double(const GammaBlock& blk1, const GammaBlock& blk2,
                        const GammaBlock& blk3, double x, double y,
                        const ContourConfig& cfg_s, const ContourConfig& cfg_t);

// Classical G-function parameter layout (a_front | a_back ; b_front | b_back)
// maps onto a GammaBlock as lf=b_front, uf=a_front, ub=a_back, lb=b_back.
struct MeijerGSpec {
    std::vector<double> a_front, a_back, b_front, b_back;
    void validate() const;  // rejects a_front - b_front differences in Z+
};
GammaBlock to_block(const MeijerGSpec& spec);

double meijer_g(const MeijerGSpec& spec, double z, const ContourConfig& cfg = {});
ContourResult meijer_g_ex(const MeijerGSpec& spec, double z,
                          const ContourConfig& cfg = {});

// Three coupled blocks: block1 in (s+t), block2 in s, block3 in t.
struct EgbmgSpec {
    MeijerGSpec block1, block2, block3;
};

double egbmg(const EgbmgSpec& spec, double x, double y,
             const ContourConfig& cfg_s = {}, const ContourConfig& cfg_t = {});
ContourResult egbmg_ex(const EgbmgSpec& spec, double x, double y,
                       const ContourConfig& cfg_s = {},
                       const ContourConfig& cfg_t = {});

}  // namespace fdrlos
