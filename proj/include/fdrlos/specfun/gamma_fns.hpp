#pragma once

#include <complex>

namespace fdrlos {

// log Gamma(x). Nonpositive-integer input is a pole -> std::domain_error.
// For negative noninteger x this is log|Gamma(x)|.
double ln_gamma(double x);

// log Gamma(z) on the complex plane, off the poles. The result is *a*
// logarithm of Gamma(z): exp(ln_gamma(z)) == Gamma(z) holds exactly, but the
// imaginary part is not guaranteed to follow any particular branch cut.
// Downstream contour code only ever exponentiates sums of these.
std::complex<double> ln_gamma(std::complex<double> z);

// psi(x) for x > 0; nonpositive input -> std::domain_error.
double digamma(double x);

}  // namespace fdrlos
