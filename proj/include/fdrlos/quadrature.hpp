#pragma once

#include <functional>
#include <vector>

namespace fdrlos {

// Settings for the two-step averages over (x, gamma).
struct QuadratureGrid {
    int laguerre_order = 96;      // nodes for the exp(-x)-weighted outer average
    double panel_tol = 1e-8;      // tolerance for the adaptive gamma panels
    int max_laguerre_order = 768; // cap for order doubling
    void validate() const;        // laguerre_order >= 32, panel_tol in (0, 1e-6]
};

struct IntegralResult {
    double value = 0.0;
    double err_est = 0.0;
    long evals = 0;
    bool converged = true;
};

// Single 15-point Gauss-Kronrod panel on [a,b]; err_est from the embedded 7-point rule.
IntegralResult gk15(const std::function<double(double)>& f, double a, double b);

// Adaptive bisection of [a,b] until the panel error sum meets max(abs_tol, rel_tol*|I|).
IntegralResult integrate(const std::function<double(double)>& f, double a, double b,
                         double abs_tol = 1e-10, double rel_tol = 1e-10,
                         int max_depth = 48);

// [a, inf) for integrands that decay on the given scale: geometrically widening
// panels, stopped once consecutive panel contributions are negligible.
IntegralResult integrate_semi_inf(const std::function<double(double)>& f, double a,
                                  double scale, double abs_tol = 1e-12,
                                  double rel_tol = 1e-10);

// Gauss-Laguerre rule for weight exp(-x) on [0, inf).
// Far-tail weights below double range underflow to zero.
struct LaguerreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
LaguerreRule laguerre_rule(int n);

}  // namespace fdrlos
