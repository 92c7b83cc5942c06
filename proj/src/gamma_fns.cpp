#include "fdrlos/specfun/gamma_fns.hpp"

#include <cmath>
#include <stdexcept>

#include "fdrlos/mathutil.hpp"

namespace fdrlos {

double ln_gamma(double x) {
    if (x <= 0.0 && x == std::floor(x))
        throw std::domain_error("ln_gamma: pole at nonpositive integer");
    return std::lgamma(x);
}

namespace {

// Lanczos approximation, g = 7, 9 terms; ~1e-13 relative on Re(z) >= 0.5.
constexpr double kLanczos[9] = {
    0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
    771.32342877765313,    -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};

std::complex<double> lanczos_ln_gamma(std::complex<double> z) {
    // expects Re(z) >= 0.5
    z -= 1.0;
    std::complex<double> sum = kLanczos[0];
    for (int i = 1; i < 9; ++i) sum += kLanczos[i] / (z + static_cast<double>(i));
    const std::complex<double> base = z + 7.5;
    return (z + 0.5) * std::log(base) - base +
           0.91893853320467274178032973640562 /* ln sqrt(2 pi) */ + std::log(sum);
}

// A logarithm of sin(pi z), stable for large |Im z| (never forms sin directly).
std::complex<double> ln_sin_pi(std::complex<double> z) {
    // sin(pi z) = -(e^{-i pi z}/(2i)) (1 - e^{2 i pi z})   for Im(z) > 0
    const std::complex<double> i_pi(0.0, kPi);
    return -i_pi * z + std::log(1.0 - std::exp(2.0 * i_pi * z)) +
           std::log(0.5) + std::complex<double>(0.0, 0.5 * kPi);
}

}  // namespace

std::complex<double> ln_gamma(std::complex<double> z) {
    if (z.imag() == 0.0) {
        const double x = z.real();
        if (x <= 0.0 && x == std::floor(x))
            throw std::domain_error("ln_gamma: pole at nonpositive integer");
        if (x > 0.0) return {std::lgamma(x), 0.0};
    }
    if (z.imag() < 0.0) return std::conj(ln_gamma(std::conj(z)));
    if (z.real() >= 0.5) return lanczos_ln_gamma(z);
    // reflection: ln Gamma(z) = ln pi - ln sin(pi z) - ln Gamma(1 - z)
    return std::log(kPi) - ln_sin_pi(z) - ln_gamma(1.0 - z);
}

double digamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("digamma: requires x > 0");
    double acc = 0.0;
    while (x < 14.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double r = 1.0 / x, r2 = r * r;
    // asymptotic series through x^{-12}; below 4e-16 for x >= 14
    double psi = std::log(x) - 0.5 * r;
    psi -= r2 * (1.0 / 12.0 +
                 r2 * (-1.0 / 120.0 +
                       r2 * (1.0 / 252.0 +
                             r2 * (-1.0 / 240.0 +
                                   r2 * (1.0 / 132.0 - r2 * 691.0 / 32760.0)))));
    return acc + psi;
}

}  // namespace fdrlos
