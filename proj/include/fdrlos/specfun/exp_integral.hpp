#pragma once

namespace fdrlos {

// Generalized exponential integral E_nu(z) = int_1^inf t^{-nu} e^{-z t} dt,
// any real nu, z > 0.
double gen_exp_integral(double nu, double z);

}  // namespace fdrlos
