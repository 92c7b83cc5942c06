#include "fdrlos/specfun/mellin_barnes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fdrlos/mathutil.hpp"
#include "fdrlos/specfun/gamma_fns.hpp"

namespace fdrlos {

void ContourConfig::validate() const {
    if (nodes < 64) throw std::invalid_argument("ContourConfig: nodes must be >= 64");
    if (!(tol > 0.0) || tol > 1e-3)
        throw std::invalid_argument("ContourConfig: tol must be in (0, 1e-3]");
    if (!std::isnan(height) && !(height > 0.0))
        throw std::invalid_argument("ContourConfig: height must be positive");
}

std::complex<double> log_psi(const GammaBlock& blk, std::complex<double> tau) {
    std::complex<double> s{0.0, 0.0};
    for (double b : blk.lf) s += ln_gamma(b + tau);
    for (double a : blk.uf) s += ln_gamma(1.0 - a - tau);
    for (double a : blk.ub) s -= ln_gamma(a + tau);
    for (double b : blk.lb) s -= ln_gamma(1.0 - b - tau);
    return s;
}

PoleGap pole_gap(const GammaBlock& blk) {
    PoleGap gap{-std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity()};
    for (double b : blk.lf) gap.left = std::max(gap.left, -b);
    for (double a : blk.uf) gap.right = std::min(gap.right, 1.0 - a);
    return gap;
}

namespace {

struct LineSamples {
    std::vector<std::complex<double>> vals;  // exp(log_psi - tau ln z - shift)
    double shift = 0.0;                      // common log magnitude removed
    double h = 0.0;
    double T = 0.0;
};

// Magnitude of the integrand (relative log scale) at sigma + i t.
double log_mag(const GammaBlock& blk, double sigma, double t, double lnz) {
    const std::complex<double> tau(sigma, t);
    return (log_psi(blk, tau) - tau * lnz).real();
}

// Truncation height: grow until the integrand has dropped by ~37 decades
// relative to its on-axis magnitude. Throws if no decay by T = 600.
double auto_height(const GammaBlock& blk, double sigma, double lnz) {
    const double ref = log_mag(blk, sigma, 0.0, lnz);
    double T = 12.0;
    while (T < 600.0) {
        if (log_mag(blk, sigma, T, lnz) - ref < -85.0) return T;
        T *= 1.35;
    }
    throw divergent_settings("contour integrand does not decay within T <= 600");
}

// Uniform samples of exp(log_psi - tau ln z) along the line, common scale out.
LineSamples sample_line(const GammaBlock& blk, double sigma, double lnz, double h,
                        double T) {
    const int N = static_cast<int>(std::ceil(T / h));
    LineSamples out;
    out.h = h;
    out.T = N * h;
    std::vector<double> lre(2 * N + 1);
    std::vector<double> lim(2 * N + 1);
    double mx = -std::numeric_limits<double>::infinity();
    for (int j = -N; j <= N; ++j) {
        const std::complex<double> tau(sigma, j * h);
        const std::complex<double> lp = log_psi(blk, tau) - tau * lnz;
        lre[j + N] = lp.real();
        lim[j + N] = lp.imag();
        mx = std::max(mx, lp.real());
    }
    out.shift = mx;
    out.vals.resize(2 * N + 1);
    for (int j = 0; j <= 2 * N; ++j)
        out.vals[j] = std::polar(std::exp(lre[j] - mx), lim[j]);
    return out;
}

double line_sum(const LineSamples& s) {
    // plain Riemann sum; endpoint decay makes the trapezoid correction moot
    std::complex<double> acc{0.0, 0.0};
    for (const auto& v : s.vals) acc += v;
    return acc.real() * s.h / (2.0 * kPi) * std::exp(s.shift);
}

// Residual decay rate near the endpoint, for the tail error bound.
double tail_estimate(const GammaBlock& blk, double sigma, double lnz, double T,
                     double shift) {
    const double l1 = log_mag(blk, sigma, 0.9 * T, lnz);
    const double l2 = log_mag(blk, sigma, T, lnz);
    const double rate = std::max((l1 - l2) / (0.1 * T), 1e-3);
    // |int_T^inf| <= |f(T)| / rate, both half-lines
    return 2.0 * std::exp(l2 - shift) / rate / (2.0 * kPi) * std::exp(shift);
}

}  // namespace

ContourResult mb_line(const GammaBlock& blk, double z, const ContourConfig& cfg) {
    cfg.validate();
    if (!(z > 0.0)) throw std::domain_error("mb_line: requires z > 0");
    if (blk.empty()) throw divergent_settings("mb_line: empty gamma block");
    const double lnz = std::log(z);
    double sigma = cfg.sigma;
    if (std::isnan(sigma)) {
        const PoleGap gap = pole_gap(blk);
        if (!gap.feasible())
            throw contour_infeasible("mb_line: no vertical line separates the poles");
        if (std::isinf(gap.left) && std::isinf(gap.right))
            sigma = 0.5;
        else if (std::isinf(gap.left))
            sigma = gap.right - 0.5;
        else if (std::isinf(gap.right))
            sigma = gap.left + 0.5;
        else
            sigma = 0.5 * (gap.left + gap.right);
    }
    const double T = std::isnan(cfg.height) ? auto_height(blk, sigma, lnz) : cfg.height;

    double h = 2.0 * T / cfg.nodes;
    h = std::min(h, 1.0 / 16.0);
    LineSamples s = sample_line(blk, sigma, lnz, h, T);
    double v = line_sum(s);
    ContourResult res;
    res.height_used = s.T;
    double delta = std::numeric_limits<double>::infinity();
    for (int pass = 0; pass < 6; ++pass) {
        h *= 0.5;
        LineSamples s2 = sample_line(blk, sigma, lnz, h, T);
        const double v2 = line_sum(s2);
        delta = std::abs(v2 - v);
        v = v2;
        res.nodes_used = static_cast<int>(s2.vals.size());
        if (delta <= cfg.tol * std::max(std::abs(v), 1e-300)) break;
    }
    res.value = v;
    res.err_est = delta + tail_estimate(blk, sigma, lnz, T, 0.0);
    res.converged = delta <= cfg.tol * std::max(std::abs(v), 1e-300);
    return res;
}

namespace {

// Relative magnitude drop of a line factor between the axis and height t.
double drop(const GammaBlock& blk, double sigma, double lnz, double t) {
    return log_mag(blk, sigma, t, lnz) - log_mag(blk, sigma, 0.0, lnz);
}

// Height containing most of a factor's mass (drop of ~20 e-units).
double core_width(const GammaBlock& blk, double sigma, double lnz) {
    double T = 4.0;
    while (T < 600.0) {
        if (drop(blk, sigma, lnz, T) < -20.0) return T;
        T *= 1.35;
    }
    return 600.0;
}

// Truncation height for one line of the double contour.  A line factor with
// slow decay of its own is still admissible when the coupled s+t factor
// supplies the decay, so the criterion is joint: the line factor times the
// s+t factor (offset by the other line's core width) must drop by ~85.
double joint_height(const GammaBlock& line_blk, double sigma_line, double lnz,
                    const GammaBlock& blk1, double sigma_sum, double other_core) {
    double T = 12.0;
    while (T < 600.0) {
        double d = drop(line_blk, sigma_line, lnz, T);
        if (!blk1.empty())
            d += drop(blk1, sigma_sum, 0.0, std::max(T - other_core, 0.0));
        if (d < -85.0) return T;
        T *= 1.3;
    }
    throw divergent_settings("double contour integrand does not decay within T <= 600");
}

struct DoubleSum {
    double value = 0.0;
    double ring = 0.0;  // boundary-ring magnitude, basis for the tail estimate
};

DoubleSum double_sum(const LineSamples& A, const LineSamples& B, const GammaBlock& blk1,
                     double sigma_sum, double h) {
    // C over the s+t line, shared step h
    const int NA = static_cast<int>(A.vals.size());
    const int NB = static_cast<int>(B.vals.size());
    const double TA = A.T, TB = B.T;
    const int NC = NA + NB - 1;
    std::vector<std::complex<double>> C(NC);
    double mxc = -std::numeric_limits<double>::infinity();
    std::vector<double> cre(NC), cim(NC);
    for (int r = 0; r < NC; ++r) {
        const double d = -TA - TB + r * h;
        const std::complex<double> lp = log_psi(blk1, {sigma_sum, d});
        cre[r] = lp.real();
        cim[r] = lp.imag();
        mxc = std::max(mxc, lp.real());
    }
    for (int r = 0; r < NC; ++r)
        C[r] = std::polar(std::exp(cre[r] - mxc), cim[r]);

    // conv(A,B) dotted with C
    std::vector<std::complex<double>> conv(NC, {0.0, 0.0});
    for (int j = 0; j < NA; ++j) {
        const std::complex<double> aj = A.vals[j];
        for (int k2 = 0; k2 < NB; ++k2) conv[j + k2] += aj * B.vals[k2];
    }
    std::complex<double> acc{0.0, 0.0};
    for (int r = 0; r < NC; ++r) acc += conv[r] * C[r];
    const double scale = std::exp(A.shift + B.shift + mxc);

    DoubleSum out;
    out.value = acc.real() * h * h / (4.0 * kPi * kPi) * scale;
    double ring = 0.0;
    for (int k2 = 0; k2 < NB; ++k2)
        ring += std::abs(A.vals[0] * B.vals[k2] * C[k2]) +
                std::abs(A.vals[NA - 1] * B.vals[k2] * C[NA - 1 + k2]);
    for (int j = 0; j < NA; ++j)
        ring += std::abs(A.vals[j] * B.vals[0] * C[j]) +
                std::abs(A.vals[j] * B.vals[NB - 1] * C[j + NB - 1]);
    // ring sum times a decay length of ~1 in t approximates the truncated mass
    out.ring = ring * h * h / (4.0 * kPi * kPi) * scale / h;
    return out;
}

}  // namespace

ContourResult mb_double(const GammaBlock& blk1, const GammaBlock& blk2,
                        const GammaBlock& blk3, double x, double y,
                        const ContourConfig& cfg_s, const ContourConfig& cfg_t) {
    cfg_s.validate();
    cfg_t.validate();
    if (!(x > 0.0) || !(y > 0.0)) throw std::domain_error("mb_double: requires x, y > 0");
    if (std::isnan(cfg_s.sigma) || std::isnan(cfg_t.sigma))
        throw std::invalid_argument("mb_double: explicit sigmas required");
    const double lnx = std::log(x), lny = std::log(y);
    const double ss = cfg_s.sigma, st = cfg_t.sigma;

    const double core_s = core_width(blk2, ss, lnx);
    const double core_t = core_width(blk3, st, lny);
    const double Ts =
        std::isnan(cfg_s.height) ? joint_height(blk2, ss, lnx, blk1, ss + st, core_t)
                                 : cfg_s.height;
    const double Tt =
        std::isnan(cfg_t.height) ? joint_height(blk3, st, lny, blk1, ss + st, core_s)
                                 : cfg_t.height;

    const double tol = std::min(cfg_s.tol, cfg_t.tol);
    double h = 1.0 / 32.0;
    LineSamples A = sample_line(blk2, ss, lnx, h, Ts);
    LineSamples B = sample_line(blk3, st, lny, h, Tt);
    DoubleSum cur = double_sum(A, B, blk1, ss + st, h);
    ContourResult res;
    double delta = std::numeric_limits<double>::infinity();
    for (int pass = 0; pass < 2; ++pass) {
        h *= 0.5;
        A = sample_line(blk2, ss, lnx, h, Ts);
        B = sample_line(blk3, st, lny, h, Tt);
        const DoubleSum nxt = double_sum(A, B, blk1, ss + st, h);
        delta = std::abs(nxt.value - cur.value);
        cur = nxt;
        res.nodes_used = static_cast<int>(A.vals.size() + B.vals.size());
        if (delta <= tol * std::max(std::abs(cur.value), 1e-300)) break;
    }
    res.value = cur.value;
    res.height_used = Ts;
    res.err_est = delta + cur.ring;
    res.converged = delta <= tol * std::max(std::abs(cur.value), 1e-300);
    return res;
}

void MeijerGSpec::validate() const {
    for (double a : a_front)
        for (double b : b_front) {
            const double d = a - b;
            if (d > 0.5 && near_integer(d, 1e-9)) {
                std::ostringstream os;
                os << "MeijerGSpec: a_front entry " << a << " minus b_front entry " << b
                   << " is a positive integer; pole families collide";
                throw contour_infeasible(os.str());
            }
        }
}

GammaBlock to_block(const MeijerGSpec& spec) {
    return GammaBlock{spec.b_front, spec.a_front, spec.a_back, spec.b_back};
}

ContourResult meijer_g_ex(const MeijerGSpec& spec, double z, const ContourConfig& cfg) {
    spec.validate();
    const GammaBlock blk = to_block(spec);
    ContourConfig c = cfg;
    if (std::isnan(c.sigma)) {
        const PoleGap gap = pole_gap(blk);
        if (!gap.feasible()) {
            std::ostringstream os;
            os << "meijer_g: contour infeasible, pole gap (" << gap.left << ", "
               << gap.right << ") is empty";
            throw contour_infeasible(os.str());
        }
    } else {
        const PoleGap gap = pole_gap(blk);
        if (!(c.sigma > gap.left && c.sigma < gap.right)) {
            std::ostringstream os;
            os << "meijer_g: sigma " << c.sigma << " outside pole gap (" << gap.left
               << ", " << gap.right << ")";
            throw contour_infeasible(os.str());
        }
    }
    return mb_line(blk, z, c);
}

double meijer_g(const MeijerGSpec& spec, double z, const ContourConfig& cfg) {
    return meijer_g_ex(spec, z, cfg).value;
}

ContourResult egbmg_ex(const EgbmgSpec& spec, double x, double y,
                       const ContourConfig& cfg_s, const ContourConfig& cfg_t) {
    spec.block1.validate();
    spec.block2.validate();
    spec.block3.validate();
    const GammaBlock b1 = to_block(spec.block1);
    const GammaBlock b2 = to_block(spec.block2);
    const GammaBlock b3 = to_block(spec.block3);

    ContourConfig cs = cfg_s, ct = cfg_t;
    const PoleGap g2 = pole_gap(b2), g3 = pole_gap(b3);
    if (std::isnan(ct.sigma)) {
        if (!g3.feasible()) throw contour_infeasible("egbmg: block3 pole gap empty");
        ct.sigma = std::isinf(g3.left)    ? g3.right - 0.5
                   : std::isinf(g3.right) ? g3.left + 0.5
                                          : 0.5 * (g3.left + g3.right);
    }
    if (std::isnan(cs.sigma)) {
        if (!g2.feasible()) throw contour_infeasible("egbmg: block2 pole gap empty");
        double lo = g2.left, hi = g2.right;
        if (!b1.empty()) {
            const PoleGap g1 = pole_gap(b1);
            lo = std::max(lo, g1.left - ct.sigma);
            hi = std::min(hi, g1.right - ct.sigma);
        }
        if (!(lo < hi))
            throw contour_infeasible("egbmg: no s-abscissa compatible with block1");
        if (std::isinf(lo) && std::isinf(hi))
            cs.sigma = 0.5;
        else if (std::isinf(lo))
            cs.sigma = hi - 0.5;
        else if (std::isinf(hi))
            cs.sigma = lo + 0.5;
        else
            cs.sigma = 0.5 * (lo + hi);
    }

    if (b1.empty()) {
        // separable product of two univariate contours
        const ContourResult rs = mb_line(b2, x, cs);
        const ContourResult rt = mb_line(b3, y, ct);
        ContourResult out;
        out.value = rs.value * rt.value;
        out.err_est = std::abs(rs.value) * rt.err_est + std::abs(rt.value) * rs.err_est;
        out.nodes_used = rs.nodes_used + rt.nodes_used;
        out.converged = rs.converged && rt.converged;
        return out;
    }
    return mb_double(b1, b2, b3, x, y, cs, ct);
}

double egbmg(const EgbmgSpec& spec, double x, double y, const ContourConfig& cfg_s,
             const ContourConfig& cfg_t) {
    return egbmg_ex(spec, x, y, cfg_s, cfg_t).value;
}

}  // namespace fdrlos
