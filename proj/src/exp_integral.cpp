#include "fdrlos/specfun/exp_integral.hpp"

#include <cmath>
#include <stdexcept>

#include "fdrlos/specfun/kummer.hpp"

namespace fdrlos {

// E_nu(z) = e^{-z} U(1, 2-nu, z); the U first parameter is 1 > 0, so the
// Laplace-integral route is always available.
double gen_exp_integral(double nu, double z) {
    if (!(z > 0.0)) throw std::domain_error("gen_exp_integral: requires z > 0");
    return std::exp(-z) * kummer_u(1.0, 2.0 - nu, z);
}

}  // namespace fdrlos
