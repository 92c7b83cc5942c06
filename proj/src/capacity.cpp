#include "fdrlos/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fdrlos/mathutil.hpp"
#include "fdrlos/specfun/acceleration.hpp"
#include "fdrlos/specfun/gamma_fns.hpp"
#include "fdrlos/specfun/kummer.hpp"
#include "fdrlos/specfun/mellin_barnes.hpp"

namespace fdrlos {

const char* to_string(Method m) {
    switch (m) {
        case Method::quadrature: return "quadrature";
        case Method::closed_form: return "closed_form";
        case Method::approx_low_ratio: return "approx_low_ratio";
        case Method::approx_high_ratio: return "approx_high_ratio";
        case Method::high_snr: return "high_snr";
        case Method::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

namespace {

std::string strf(const char* fmt, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, fmt);
    vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return std::string(buf);
}

double fact(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

double binom(int n, int i) {
    double r = 1.0;
    for (int j = 0; j < i; ++j) r = r * (n - j) / (j + 1);
    return r;
}

double poch(double a, int l) {
    double r = 1.0;
    for (int j = 0; j < l; ++j) r *= a + j;
    return r;
}

ContourConfig ctr(double sigma, double tol) {
    ContourConfig c;
    c.sigma = sigma;
    c.tol = tol;
    return c;
}

// Conditional-density coefficients: f(g|x) = pref exp(-beta g) Mhat(m,1,c2 g)
// with Mhat the exponentially scaled confluent series.
struct CondCoef {
    double c1, c2, beta, pref;
};

CondCoef cond_coef(const ChannelParams& p, double x) {
    CondCoef c;
    c.c1 = (p.k + 1.0) / (x * p.gamma_bar);
    c.c2 = c.c1 * p.k / (p.k + p.m * x);
    c.beta = c.c1 * p.m * x / (p.k + p.m * x);
    c.pref = std::pow(p.m * x / (p.k + p.m * x), p.m) * c.c1;
    return c;
}

// Integral of weight(g) against the conditional density over [lo, inf).
template <class W>
double cond_integral(const ChannelParams& p, double x, double lo, W&& weight) {
    const CondCoef c = cond_coef(p, x);
    auto f = [&](double g) {
        return weight(g) * c.pref * std::exp(-c.beta * g) *
               kummer_m_scaled(p.m, 1.0, c.c2 * g);
    };
    return integrate_semi_inf(f, lo, 1.0 / c.beta, 1e-13, 1e-11).value;
}

struct OuterResult {
    double value = 0.0;
    double err_est = 0.0;
    int order_used = 0;
    bool settled = true;
};

// Exponentially weighted average over the conditioning variable: adaptive
// head on [0,1] (resolves the small-x structure when k is tiny) plus a
// shifted Laguerre tail with order doubling.
template <class G>
OuterResult outer_average(const QuadratureGrid& grid, G&& g) {
    grid.validate();
    const double c = 1.0;
    const IntegralResult head =
        integrate([&](double x) { return std::exp(-x) * g(x); }, 0.0, c, 1e-12, 1e-11);

    auto tail_at = [&](int n) {
        const LaguerreRule r = laguerre_rule(n);
        double acc = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i)
            if (r.weights[i] > 0.0) acc += r.weights[i] * g(c + r.nodes[i]);
        return std::exp(-c) * acc;
    };

    OuterResult out;
    int order = grid.laguerre_order;
    double prev = tail_at(order);
    double cur = prev;
    double delta = std::numeric_limits<double>::infinity();
    out.settled = false;
    while (order * 2 <= grid.max_laguerre_order) {
        order *= 2;
        cur = tail_at(order);
        delta = std::abs(cur - prev);
        if (delta <= grid.panel_tol * std::max(1.0, std::abs(cur))) {
            out.settled = true;
            break;
        }
        prev = cur;
    }
    out.value = head.value + cur;
    out.err_est = head.err_est + (std::isfinite(delta) ? delta : 0.0);
    out.order_used = order;
    return out;
}

}  // namespace

// --- ORA ---

CapacityEstimate ora_quadrature(const ChannelParams& p, const NumericsConfig& cfg) {
    p.validate();
    const OuterResult o = outer_average(cfg.grid, [&](double x) {
        return cond_integral(p, x, 0.0, [](double g) { return std::log1p(g); });
    });
    CapacityEstimate e;
    e.method = Method::quadrature;
    e.value = o.value / kLn2;
    e.err_est = o.err_est / kLn2;
    e.diagnostics = strf("laguerre_order=%d%s", o.order_used,
                         o.settled ? "" : ";order_doubling_unsettled");
    return e;
}

CapacityEstimate ora_closed(const ChannelParams& p, const NumericsConfig& cfg) {
    p.validate();
    if (!(p.k > 0.0))
        throw std::domain_error("ora_closed: requires a line-of-sight component (k > 0)");
    const double k = p.k, m = p.m, gb = p.gamma_bar;
    const GammaBlock b1{{-1.0}, {-m}, {}, {-1.0}};
    const GammaBlock b2{{0.0}, {0.0, 0.0}, {1.0}, {}};
    const GammaBlock b3{{0.0}, {0.0}, {}, {}};
    const ContourResult dbl =
        mb_double(b1, b2, b3, k * gb / ((k + 1.0) * m), k / m,
                  ctr(-0.25, cfg.contour_tol), ctr(0.5, cfg.contour_tol));
    // the shifted s-contour passes one pole; this line term restores its residue
    const GammaBlock bc{{0.0, 0.0}, {0.0, 0.0, 0.0}, {1.0}, {}};
    const ContourResult cor =
        mb_line(bc, gb / (k + 1.0), ctr(-0.25, cfg.contour_tol));
    const double w = k / (m * std::tgamma(m) * kLn2);
    CapacityEstimate e;
    e.method = Method::closed_form;
    e.value = cor.value / kLn2 + w * dbl.value;
    e.err_est = cor.err_est / kLn2 + std::abs(w) * dbl.err_est;
    e.diagnostics = strf("contour_nodes=%d", dbl.nodes_used + cor.nodes_used);
    return e;
}

CapacityEstimate ora_closed_integer(const ChannelParams& p, const NumericsConfig& cfg) {
    p.validate();
    if (!(p.k > 0.0))
        throw std::domain_error(
            "ora_closed_integer: requires a line-of-sight component (k > 0)");
    if (!near_integer(p.m, 1e-6))
        throw std::invalid_argument("ora_closed_integer: m must be a positive integer");
    const int mi = static_cast<int>(std::lround(p.m));
    const double m = static_cast<double>(mi), k = p.k, gb = p.gamma_bar;
    const double x = k / m, y = (k + 1.0) / gb;
    double tot = 0.0, terr = 0.0;
    int nodes = 0;
    for (int i = 0; i < mi; ++i) {
        const GammaBlock b1{{m - i}, {1.0}, {}, {}};
        const GammaBlock b2{{0.0}, {}, {}, {}};
        const GammaBlock b3{{m - 1.0, m - 1.0, m + i}, {m - 1.0}, {m}, {1.0}};
        double ss, st;
        if (mi == 1) {
            ss = st = 0.2;
        } else {
            st = (1.0 - m) + 0.25;
            ss = 0.5 * (std::max(0.0, i - m - st) - st);
        }
        const ContourResult r = mb_double(b1, b2, b3, x, y, ctr(ss, cfg.contour_tol),
                                          ctr(st, cfg.contour_tol));
        double d = r.value, derr = r.err_est;
        nodes += r.nodes_used;
        if (mi == 1) {
            // the joint contour passes the first pole of the coupled factor
            const GammaBlock bs{{0.0, 1.0}, {1.0}, {}, {}};
            const ContourResult rs = mb_line(bs, y / x, ctr(0.2, cfg.contour_tol));
            d -= rs.value;
            derr += rs.err_est;
            nodes += rs.nodes_used;
        }
        const double w = std::pow(k / m, i) / (fact(i) * fact(i) * std::tgamma(m - i));
        tot += w * d;
        terr += std::abs(w) * derr;
    }
    const double pre = std::pow(gb / (k + 1.0), m - 1.0) * std::tgamma(m) / kLn2;
    CapacityEstimate e;
    e.method = Method::closed_form;
    e.value = pre * tot;
    e.err_est = std::abs(pre) * terr;
    e.diagnostics = strf("terms=%d;contour_nodes=%d", mi, nodes);
    return e;
}

namespace {

CapacityEstimate conditional_closed_int(const ChannelParams& p, double x, int mi,
                                        const NumericsConfig& cfg) {
    const CondCoef c = cond_coef(p, x);
    double acc = 0.0, err = 0.0;
    for (int i = 0; i < mi; ++i) {
        const GammaBlock bj{{0.0, 0.0}, {0.0, -static_cast<double>(i)}, {1.0}, {}};
        const ContourResult r = mb_line(bj, 1.0 / c.beta, ctr(-0.5, cfg.contour_tol));
        const double ji = std::pow(c.beta, -(i + 1.0)) * r.value;
        const double w = binom(mi - 1, i) * std::pow(c.c2, i) / fact(i);
        acc += w * ji;
        err += std::abs(w) * std::pow(c.beta, -(i + 1.0)) * r.err_est;
    }
    CapacityEstimate e;
    e.method = Method::closed_form;
    e.value = c.pref * acc / kLn2;
    e.err_est = std::abs(c.pref) * err / kLn2;
    e.diagnostics = strf("branch=integer;terms=%d", mi);
    return e;
}

CapacityEstimate conditional_closed_nonint(const ChannelParams& p, double x,
                                           const NumericsConfig& cfg) {
    if (!(p.k > 0.0))
        throw std::domain_error(
            "ora_conditional_closed: non-integer order requires k > 0");
    const double m = p.m, k = p.k;
    const CondCoef c = cond_coef(p, x);
    const double zt = m * x / k;
    const double st = (m < 1.0) ? 0.5 * std::max(m - 1.0, -0.95) - 0.025 : -0.25;
    const GammaBlock b1{{1.0}, {}, {}, {}};
    const GammaBlock b2{{1.0}, {1.0, 1.0}, {}, {0.0}};
    const GammaBlock b3{{1.0 - m}, {1.0}, {1.0}, {}};
    const ContourResult r = mb_double(b1, b2, b3, c.beta, zt,
                                      ctr(0.5, cfg.contour_tol),
                                      ctr(st, cfg.contour_tol));
    double e_sum = r.value, e_err = r.err_est;
    int crossings = 0;
    // t-poles passed by the shifted contour re-enter as residue line terms
    for (int n = 0;; ++n) {
        const double tn = m - 1.0 - n;
        if (!(tn > st)) break;
        const GammaBlock bc{{1.0 + tn, 1.0}, {1.0, 1.0}, {}, {0.0}};
        const ContourResult rc = mb_line(bc, c.beta, ctr(0.5, cfg.contour_tol));
        const double w = ((n % 2) ? -1.0 : 1.0) / fact(n) * std::tgamma(-tn) /
                         std::tgamma(1.0 + tn) * std::pow(zt, -tn);
        e_sum += w * rc.value;
        e_err += std::abs(w) * rc.err_est;
        ++crossings;
    }
    const double pre =
        std::pow(m * x / (k + m * x), m - 1.0) / (std::tgamma(1.0 - m) * kLn2);
    CapacityEstimate e;
    e.method = Method::closed_form;
    e.value = pre * e_sum;
    e.err_est = std::abs(pre) * e_err;
    e.diagnostics = strf("branch=general;residue_terms=%d", crossings);
    return e;
}

}  // namespace

CapacityEstimate ora_conditional_closed(const ChannelParams& p, double x,
                                        const NumericsConfig& cfg) {
    p.validate();
    if (!(x > 0.0))
        throw std::domain_error("ora_conditional_closed: requires x > 0");
    if (near_integer(p.m, 1e-6)) {
        ChannelParams q = p;
        q.m = std::round(p.m);
        return conditional_closed_int(q, x, static_cast<int>(std::lround(p.m)), cfg);
    }
    return conditional_closed_nonint(p, x, cfg);
}

CapacityEstimate ora_approx_low_ratio(const ChannelParams& p,
                                      const NumericsConfig& cfg) {
    p.validate();
    const double z = p.gamma_bar / (p.k + 1.0);
    MeijerGSpec g1;
    g1.a_front = {1.0, 1.0, 0.0, 0.0};
    g1.b_front = {1.0};
    g1.b_back = {0.0};
    MeijerGSpec g2;
    g2.a_front = {1.0, 1.0, -1.0, 1.0};
    g2.b_front = {1.0};
    g2.b_back = {0.0};
    const ContourConfig cc = ctr(-0.5, cfg.contour_tol);
    const ContourResult r1 = meijer_g_ex(g1, z, cc);
    const ContourResult r2 = meijer_g_ex(g2, z, cc);
    const double w2 = p.k * (p.m - 1.0) / (p.m * kLn2);
    CapacityEstimate e;
    e.method = Method::approx_low_ratio;
    e.value = r1.value / kLn2 + w2 * r2.value;
    e.err_est = r1.err_est / kLn2 + std::abs(w2) * r2.err_est;
    e.diagnostics = "expansion=small_k;order=1";
    return e;
}

CapacityEstimate ora_approx_high_ratio(const ChannelParams& p, int n_terms,
                                       const NumericsConfig& cfg) {
    p.validate();
    if (n_terms < 0)
        throw std::invalid_argument("ora_approx_high_ratio: n_terms must be >= 0");
    if (!(p.k > 0.0))
        throw std::domain_error("ora_approx_high_ratio: requires k > 0");
    if (!near_integer(p.m, 1e-6))
        throw std::invalid_argument("ora_approx_high_ratio: m must be a positive integer");
    const int mi = static_cast<int>(std::lround(p.m));
    const double m = static_cast<double>(mi), k = p.k;
    const double z = k * p.gamma_bar / (m * (k + 1.0));
    const ContourConfig cc = ctr(-0.5, cfg.contour_tol);
    const bool simplified = (n_terms == 0);
    const int nl = simplified ? 1 : n_terms;
    double acc = 0.0, err = 0.0;
    for (int i = 0; i < mi; ++i) {
        for (int l = 0; l < nl; ++l) {
            MeijerGSpec g;
            g.b_front = {1.0, l + m - 1.0};
            g.a_front = {1.0, 1.0, -static_cast<double>(i)};
            g.a_back = {m - 1.0};
            g.b_back = {0.0};
            const ContourResult r = meijer_g_ex(g, z, cc);
            // n_terms == 0 keeps only the leading l = 0 contribution
            const double w = ((l % 2) ? -1.0 : 1.0) * std::pow(k / m, i + 1.0 - m - l) *
                             poch(m - i, l) / (fact(i) * fact(i) * fact(l));
            acc += w * r.value;
            err += std::abs(w) * r.err_est;
        }
    }
    const double pre = std::tgamma(m) / kLn2;
    CapacityEstimate e;
    e.method = Method::approx_high_ratio;
    e.value = pre * acc;
    e.err_est = pre * err;
    e.diagnostics = simplified ? strf("expansion=large_k;variant=simplified")
                               : strf("expansion=large_k;inner_terms=%d", n_terms);
    return e;
}

namespace {

// Terms of the large-SNR series: positive, summing to 1, decaying ~ 1/i^2.
// Evaluated through a rescaled real integral that stays in range for any i.
std::vector<double> high_snr_terms(double m, double z, bool extra_factorial, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        const double a = m + i - 1.0;
        const double lg = ln_gamma(i + 1.0) * (extra_factorial ? 2.0 : 1.0);
        const double lo = std::max(0.0, i - 12.0 * std::sqrt(i + 4.0));
        const double hi = i + 12.0 * std::sqrt(i + 4.0) + 20.0;
        auto f = [&](double v) {
            return std::exp(a * std::log(v) - v - lg) * std::pow(1.0 + v / z, -m - 1.0);
        };
        const double vpk = std::max(a, 0.1);
        const double scale = std::exp(std::min(a * std::log(vpk) - vpk - lg, 700.0)) *
                             std::pow(1.0 + vpk / z, -m - 1.0);
        const IntegralResult r =
            integrate(f, lo, hi, std::max(1e-300, 1e-13 * scale), 1e-12);
        out[i] = m * std::pow(z, -m) * r.value;
    }
    return out;
}

CapacityEstimate high_snr_impl(const ChannelParams& p, double gamma0, bool opra,
                               bool extra_factorial, double series_tol) {
    p.validate();
    if (!(p.k > 0.0))
        throw std::domain_error("high-SNR expansion requires k > 0");
    if (!(series_tol > 0.0))
        throw std::invalid_argument("high-SNR expansion: series_tol must be positive");
    const double z = p.k / p.m;
    const int n = 56;
    const std::vector<double> that = high_snr_terms(p.m, z, extra_factorial, n);
    std::vector<double> t(n);
    double sum = 0.0, harmonic = 0.0;
    int used = n;
    for (int i = 0; i < n; ++i) {
        if (i > 0) harmonic += 1.0 / i;
        const double coeff = opra ? digamma(i + 1.0) : harmonic;
        t[i] = coeff * that[i];
        sum += t[i];
        if (i >= 12 && std::abs(t[i]) <= series_tol * std::max(std::abs(sum), 1e-300)) {
            used = i + 1;
            break;
        }
    }
    // the remainder decays algebraically; fit t_i i^2 = a + b ln i on the
    // last terms and integrate the fitted envelope past the truncation
    double tail = 0.0;
    if (used >= 8) {
        double su = 0, suu = 0, sy = 0, suy = 0;
        const int nf = 6;
        for (int i = used - nf; i < used; ++i) {
            const double u = std::log(static_cast<double>(i));
            const double yv = t[i] * static_cast<double>(i) * i;
            su += u;
            suu += u * u;
            sy += yv;
            suy += u * yv;
        }
        const double det = nf * suu - su * su;
        const double b = (nf * suy - su * sy) / det;
        const double a = (sy - b * su) / nf;
        tail = a / used + b * (std::log(static_cast<double>(used)) + 1.0) / used;
    }
    const double base =
        opra ? std::log2(p.gamma_bar / (gamma0 * (p.k + 1.0))) - kEulerGamma / kLn2
             : std::log2(p.gamma_bar / (p.k + 1.0)) - 2.0 * kEulerGamma / kLn2;
    CapacityEstimate e;
    e.method = Method::high_snr;
    e.value = base + (sum + tail) / kLn2;
    e.err_est = (0.25 * std::abs(tail) + std::abs(t[used - 1])) / kLn2;
    e.diagnostics = strf("terms=%d;asymptotic%s", used,
                         z < 1.0 ? "" : ";outside_certified_convergence");
    return e;
}

}  // namespace

CapacityEstimate ora_high_snr(const ChannelParams& p, double series_tol) {
    return high_snr_impl(p, 1.0, false, false, series_tol);
}

CapacityEstimate ora_high_snr_variant(const ChannelParams& p, bool extra_factorial,
                                      double series_tol) {
    return high_snr_impl(p, 1.0, false, extra_factorial, series_tol);
}

// --- OPRA ---

namespace {

// Brent root search, stopping on |f| <= ftol.
template <class F>
std::pair<double, double> brent_root(F&& f, double a, double b, double fa, double fb,
                                     double ftol) {
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < 200; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 =
            2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 1e-16;
        const double xm = 0.5 * (c - b);
        if (std::abs(fb) <= ftol || std::abs(xm) <= tol1) return {b, fb};
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double pq, q, r;
            const double s = fb / fa;
            if (a == c) {
                pq = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                pq = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (pq > 0.0) q = -q;
            pq = std::abs(pq);
            if (2.0 * pq < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = pq / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    return {b, fb};
}

}  // namespace

OpraCutoff opra_cutoff(const ChannelParams& p, const QuadratureGrid& grid, double tol) {
    p.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("opra_cutoff: tol must be positive");
    auto residual = [&](double g0) {
        return outer_average(grid, [&](double x) {
                   return cond_integral(p, x, g0, [g0](double g) {
                       return 1.0 / g0 - 1.0 / g;
                   });
               }).value -
               1.0;
    };
    // fixed probe grid: checks the residual is monotone and brackets the root
    const double probe[] = {1e-12, 1e-8, 1e-4, 0.01, 0.05, 0.1, 0.2, 0.4, 0.7, 1.0};
    const int np = static_cast<int>(std::size(probe));
    double rv[np];
    for (int i = 0; i < np; ++i) rv[i] = residual(probe[i]);
    for (int i = 1; i < np; ++i) {
        if (rv[i] > rv[i - 1] + 1e-9 * (1.0 + std::abs(rv[i - 1])))
            throw numeric_error(
                strf("opra_cutoff: residual not monotone between %.3g and %.3g",
                     probe[i - 1], probe[i]));
    }
    int bi = -1;
    for (int i = 1; i < np; ++i) {
        if (rv[i - 1] > 0.0 && rv[i] <= 0.0) {
            bi = i;
            break;
        }
    }
    if (bi < 0)
        throw numeric_error(
            strf("opra_cutoff: no bracket on (0,1]: residual(%.3g)=%.6g, "
                 "residual(%.3g)=%.6g",
                 probe[0], rv[0], probe[np - 1], rv[np - 1]));
    const auto [g0, res] =
        brent_root(residual, probe[bi - 1], probe[bi], rv[bi - 1], rv[bi], tol);
    return OpraCutoff{g0, res};
}

CapacityEstimate opra_quadrature(const ChannelParams& p, const OpraCutoff& cutoff,
                                 const NumericsConfig& cfg) {
    p.validate();
    if (!(cutoff.gamma0 > 0.0))
        throw std::invalid_argument("opra_quadrature: cutoff must be positive");
    const double g0 = cutoff.gamma0;
    const OuterResult o = outer_average(cfg.grid, [&](double x) {
        return cond_integral(p, x, g0, [g0](double g) { return std::log(g / g0); });
    });
    CapacityEstimate e;
    e.method = Method::quadrature;
    e.value = o.value / kLn2;
    e.err_est = o.err_est / kLn2;
    e.diagnostics = strf("laguerre_order=%d;gamma0=%.12g%s", o.order_used, g0,
                         o.settled ? "" : ";order_doubling_unsettled");
    return e;
}

CapacityEstimate opra_quadrature(const ChannelParams& p, const NumericsConfig& cfg) {
    return opra_quadrature(p, opra_cutoff(p, cfg.grid, cfg.cutoff_tol), cfg);
}

CapacityEstimate opra_closed(const ChannelParams& p, const OpraCutoff& cutoff,
                             const NumericsConfig& cfg) {
    p.validate();
    if (!(p.k > 0.0))
        throw std::domain_error("opra_closed: requires a line-of-sight component (k > 0)");
    if (!(cutoff.gamma0 > 0.0))
        throw std::invalid_argument("opra_closed: cutoff must be positive");
    const double k = p.k, m = p.m, gb = p.gamma_bar, g0 = cutoff.gamma0;
    const GammaBlock b1{{-1.0}, {-m}, {}, {-1.0}};
    const GammaBlock b2{{}, {1.0}, {1.0}, {}};
    const GammaBlock b3{{0.0}, {0.0}, {}, {}};
    const ContourResult dbl =
        mb_double(b1, b2, b3, k * gb / (g0 * (k + 1.0) * m), k / m,
                  ctr(-0.25, cfg.contour_tol), ctr(0.5, cfg.contour_tol));
    // residue of the pole passed by the shifted joint contour
    const GammaBlock bc{{0.0, 0.0}, {0.0, 0.0}, {1.0, 1.0}, {}};
    const ContourResult cor =
        mb_line(bc, gb / (g0 * (k + 1.0)), ctr(-0.25, cfg.contour_tol));
    const double w = k / (m * std::tgamma(m) * kLn2);
    CapacityEstimate e;
    e.method = Method::closed_form;
    e.value = cor.value / kLn2 - w * dbl.value;
    e.err_est = cor.err_est / kLn2 + std::abs(w) * dbl.err_est;
    e.diagnostics =
        strf("gamma0=%.12g;contour_nodes=%d", g0, dbl.nodes_used + cor.nodes_used);
    return e;
}

CapacityEstimate opra_closed(const ChannelParams& p, const NumericsConfig& cfg) {
    return opra_closed(p, opra_cutoff(p, cfg.grid, cfg.cutoff_tol), cfg);
}

CapacityEstimate opra_closed_series(const ChannelParams& p, const OpraCutoff& cutoff,
                                    int n_max, double tol) {
    p.validate();
    if (!(p.k > 0.0))
        throw std::domain_error("opra_closed_series: requires k > 0");
    if (!(cutoff.gamma0 > 0.0))
        throw std::invalid_argument("opra_closed_series: cutoff must be positive");
    if (n_max < 1) throw std::invalid_argument("opra_closed_series: n_max must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("opra_closed_series: tol > 0 required");
    const double k = p.k, m = p.m, g0 = cutoff.gamma0;
    const double x = k * p.gamma_bar / (g0 * (k + 1.0) * m), y = k / m;
    const double ctol = 1e-9;
    std::vector<double> partials;
    double sum = 0.0, errsum = 0.0;
    int used = 0;
    double accel_last = std::numeric_limits<double>::quiet_NaN();
    double dacc = std::numeric_limits<double>::infinity();
    bool converged = false, accelerated = false;
    for (int i = 0; i < n_max; ++i) {
        const GammaBlock b1{{i - 1.0}, {-m}, {}, {}};
        const GammaBlock b2{{0.0, 0.0}, {-static_cast<double>(i)}, {1.0, 1.0}, {}};
        const GammaBlock b3{{0.0}, {}, {}, {}};
        const double ss = -0.4;
        const double lo = std::max(0.05, (1.0 - i) - ss + 0.05);
        const double hi = (m + 1.0) - ss - 0.05;
        const double st = 0.5 * (lo + hi);
        const ContourResult r = mb_double(b1, b2, b3, x, y, ctr(ss, ctol), ctr(st, ctol));
        const double w = k / (m * std::tgamma(m) * fact(i) * fact(i));
        const double term = w * r.value;
        sum += term;
        errsum += std::abs(w) * r.err_est;
        partials.push_back(sum);
        used = i + 1;
        // stop on the accelerated tail: the change in the extrapolated limit
        if (partials.size() >= 3) {
            const AccelResult a = accelerate(partials, AccelMethod::shanks);
            if (!a.degenerate) {
                if (std::isfinite(accel_last)) dacc = std::abs(a.value - accel_last);
                accel_last = a.value;
                accelerated = true;
                if (dacc <= tol * std::max(std::abs(a.value), 1.0)) {
                    converged = true;
                    break;
                }
            }
        }
        if (i >= 1 && std::abs(term) <= tol * std::max(std::abs(sum), 1e-300)) {
            converged = true;
            break;
        }
    }
    const double val = accelerated ? accel_last : sum;
    double trunc = std::abs(val - sum);
    if (!converged && std::isfinite(dacc)) trunc += dacc;
    CapacityEstimate e;
    e.method = Method::closed_form;
    e.value = val / kLn2;
    e.err_est = (errsum + trunc) / kLn2;
    e.diagnostics = strf("series_terms=%d;accelerated=%d;converged=%d;gamma0=%.12g", used,
                         accelerated ? 1 : 0, converged ? 1 : 0, cutoff.gamma0);
    return e;
}

CapacityEstimate opra_high_snr(const ChannelParams& p, const OpraCutoff& cutoff,
                               double series_tol) {
    if (!(cutoff.gamma0 > 0.0))
        throw std::invalid_argument("opra_high_snr: cutoff must be positive");
    return high_snr_impl(p, cutoff.gamma0, true, false, series_tol);
}

CapacityEstimate opra_high_snr(const ChannelParams& p, double series_tol) {
    return opra_high_snr(p, opra_cutoff(p), series_tol);
}

double relative_error(double exact, double approx) {
    if (!(exact > 0.0))
        throw std::domain_error("relative_error: reference value must be positive");
    return std::abs(exact - approx) / exact;
}

double relative_error(const CapacityEstimate& exact, const CapacityEstimate& approx) {
    return relative_error(exact.value, approx.value);
}

}  // namespace fdrlos
