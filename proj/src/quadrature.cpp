#include "fdrlos/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "fdrlos/mathutil.hpp"

namespace fdrlos {

void QuadratureGrid::validate() const {
    if (laguerre_order < 32)
        throw std::invalid_argument("QuadratureGrid: laguerre_order must be >= 32");
    if (!(panel_tol > 0.0) || panel_tol > 1e-6)
        throw std::invalid_argument("QuadratureGrid: panel_tol must be in (0, 1e-6]");
    if (max_laguerre_order < laguerre_order)
        throw std::invalid_argument("QuadratureGrid: max_laguerre_order below base order");
}

namespace {

// 15-point Kronrod abscissae/weights with the embedded 7-point Gauss weights.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

}  // namespace

IntegralResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double hlgth = 0.5 * (b - a);
    const double centr = 0.5 * (a + b);

    double fv[15];
    const double fc = f(centr);
    fv[7] = fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = hlgth * kXgk[j];
        fv[j] = f(centr - dx);
        fv[14 - j] = f(centr + dx);
    }

    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    double resabs = std::abs(resk);
    for (int j = 0; j < 7; ++j) {
        resk += kWgk[j] * (fv[j] + fv[14 - j]);
        resabs += kWgk[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
    }
    for (int j = 0; j < 3; ++j)
        resg += kWg[j] * (fv[2 * j + 1] + fv[13 - 2 * j]);

    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv[j] - reskh) + std::abs(fv[14 - j] - reskh));

    IntegralResult r;
    r.value = resk * hlgth;
    r.evals = 15;
    resabs *= std::abs(hlgth);
    resasc *= std::abs(hlgth);
    double err = std::abs((resk - resg) * hlgth);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / eps50)
        err = std::max(eps50 * resabs, err);
    r.err_est = err;
    return r;
}

IntegralResult integrate(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, double rel_tol, int max_depth) {
    if (a == b) return {};

    struct Panel {
        double a, b, value, err;
        int depth;
    };
    auto quieter = [](const Panel& x, const Panel& y) { return x.err < y.err; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(quieter)> open(quieter);

    IntegralResult out;
    const IntegralResult first = gk15(f, a, b);
    out.evals = first.evals;
    open.push({a, b, first.value, first.err_est, 0});
    double total = first.value;
    double err = first.err_est;

    // Worst-panel-first refinement against a global budget. Per-panel accuracy
    // demands would keep bisecting panels whose estimate has hit roundoff, so
    // the loop instead stops once the loudest panel cannot be improved.
    const int panel_cap = 2048;
    int panels = 1;
    while (err > std::max(abs_tol, rel_tol * std::abs(total)) && panels < panel_cap) {
        const Panel worst = open.top();
        if (worst.err <= 1e-14 * std::abs(worst.value) || worst.depth >= max_depth) break;
        open.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const IntegralResult left = gk15(f, worst.a, mid);
        const IntegralResult right = gk15(f, mid, worst.b);
        out.evals += left.evals + right.evals;
        total += left.value + right.value - worst.value;
        err += left.err_est + right.err_est - worst.err;
        open.push({worst.a, mid, left.value, left.err_est, worst.depth + 1});
        open.push({mid, worst.b, right.value, right.err_est, worst.depth + 1});
        ++panels;
    }

    out.value = total;
    out.err_est = std::max(err, 0.0);
    out.converged =
        err <= std::max({abs_tol, rel_tol * std::abs(total), 5e-14 * std::abs(total)});
    return out;
}

IntegralResult integrate_semi_inf(const std::function<double(double)>& f, double a,
                                  double scale, double abs_tol, double rel_tol) {
    if (!(scale > 0.0)) scale = 1.0;
    IntegralResult acc;
    double lo = a;
    double width = scale;
    int quiet = 0;
    for (int panel = 0; panel < 120; ++panel) {
        const double hi = lo + width;
        IntegralResult part =
            integrate(f, lo, hi, abs_tol * 0.25, rel_tol * 0.25, 40);
        acc.value += part.value;
        acc.err_est += part.err_est;
        acc.evals += part.evals;
        acc.converged = acc.converged && part.converged;
        const double thresh = std::max(abs_tol, rel_tol * std::abs(acc.value));
        if (std::abs(part.value) < 0.25 * thresh)
            ++quiet;
        else
            quiet = 0;
        if (quiet >= 2 && panel >= 3) return acc;
        lo = hi;
        width = std::min(width * 2.0, 64.0 * scale);
    }
    acc.converged = false;
    return acc;
}

// Nodes by Newton iteration on the classical three-term recurrence; the
// recurrence values are renormalized on the fly so large orders do not
// overflow. Weights w_i = x_i / ((n+1) L_{n+1}(x_i))^2 are assembled in logs.
LaguerreRule laguerre_rule(int n) {
    if (n < 1) throw std::invalid_argument("laguerre_rule: order must be positive");
    LaguerreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);

    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * n);
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * n);
        } else {
            const double ai = i - 1;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - rule.nodes[i - 2]);
        }
        double p1 = 0.0, p2 = 0.0, lscale = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            p1 = 1.0;
            p2 = 0.0;
            lscale = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0 - z) * p2 - (j - 1.0) * p3) / j;
                const double mag = std::abs(p1);
                if (mag > 1e120) {
                    p1 /= mag;
                    p2 /= mag;
                    lscale += std::log(mag);
                }
            }
            const double pp = n * (p1 - p2) / z;  // derivative of L_n (same scale)
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-14 * std::max(1.0, z)) break;
        }
        rule.nodes[i] = z;
        // One recurrence step further for L_{n+1}(z), reusing the scaled pair.
        const double pnp1 = ((2.0 * n + 1.0 - z) * p1 - n * p2) / (n + 1.0);
        const double lw = std::log(z) - 2.0 * std::log(n + 1.0) -
                          2.0 * (std::log(std::abs(pnp1)) + lscale);
        rule.weights[i] = std::exp(lw);  // underflows to 0 for extreme nodes
    }
    return rule;
}

}  // namespace fdrlos
