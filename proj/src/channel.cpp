#include "fdrlos/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "fdrlos/mathutil.hpp"
#include "fdrlos/specfun/kummer.hpp"

namespace fdrlos {

void ChannelParams::validate() const {
    if (!(k >= 0.0)) throw std::invalid_argument("ChannelParams: k must be >= 0");
    if (!(m >= 0.5)) throw std::invalid_argument("ChannelParams: m must be >= 0.5");
    if (!(gamma_bar > 0.0))
        throw std::invalid_argument("ChannelParams: gamma_bar must be > 0");
}

double conditional_pdf(const ChannelParams& p, double gamma, double x) {
    p.validate();
    if (!(x > 0.0)) throw std::domain_error("conditional_pdf: requires x > 0");
    if (gamma < 0.0) throw std::domain_error("conditional_pdf: requires gamma >= 0");
    const double c1 = (p.k + 1.0) / (x * p.gamma_bar);
    const double c2 = c1 * p.k / (p.k + p.m * x);
    const double beta = c1 - c2;  // = c1 * m x / (k + m x), always > 0
    const double pref = std::pow(p.m * x / (p.k + p.m * x), p.m) * c1;
    // f = pref * exp(-c1 g) * 1F1(m; 1; c2 g); the scaled Kummer form keeps
    // the product finite where 1F1 alone would overflow.
    return pref * std::exp(-beta * gamma) * kummer_m_scaled(p.m, 1.0, c2 * gamma);
}

MarginalPdfResult marginal_pdf_ex(const ChannelParams& p, double gamma,
                                  const QuadratureGrid& grid) {
    p.validate();
    grid.validate();
    if (gamma < 0.0) throw std::domain_error("marginal_pdf: requires gamma >= 0");

    auto average = [&](int order) {
        const LaguerreRule rule = laguerre_rule(order);
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            acc += rule.weights[i] * conditional_pdf(p, gamma, rule.nodes[i]);
        return acc;
    };

    int order = grid.laguerre_order;
    double prev = average(order);
    MarginalPdfResult out;
    out.value = prev;
    out.converged = false;
    for (int pass = 0; pass < 2; ++pass) {
        order *= 2;
        if (order > grid.max_laguerre_order) break;
        const double cur = average(order);
        out.err_est = std::abs(cur - prev);
        out.value = cur;
        if (out.err_est <= grid.panel_tol * std::max(std::abs(cur), 1.0)) {
            out.converged = true;
            break;
        }
        prev = cur;
    }
    return out;
}

double marginal_pdf(const ChannelParams& p, double gamma, const QuadratureGrid& grid) {
    return marginal_pdf_ex(p, gamma, grid).value;
}

double sample_snr(const ChannelParams& p, std::mt19937_64& rng) {
    p.validate();
    std::gamma_distribution<double> xi_dist(p.m, 1.0 / p.m);
    std::normal_distribution<double> unit_normal(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);

    const double w0 = std::sqrt(p.k / (1.0 + p.k));
    const double w2 = std::sqrt(1.0 / (1.0 + p.k));
    const double xi = xi_dist(rng);
    const double phi = phase(rng);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const std::complex<double> g2(unit_normal(rng) * inv_sqrt2,
                                  unit_normal(rng) * inv_sqrt2);
    const std::complex<double> g3(unit_normal(rng) * inv_sqrt2,
                                  unit_normal(rng) * inv_sqrt2);
    const std::complex<double> s =
        w0 * std::sqrt(xi) * std::polar(1.0, phi) + w2 * g2 * g3;
    return p.gamma_bar * std::norm(s);
}

}  // namespace fdrlos
