#pragma once

#include <string>

namespace fdrlos {

// 1F1(a, b, z) for z >= 0, b not a nonpositive integer.
// Relative accuracy target 1e-10 for z <= 700.
// Results that would exceed double range throw std::overflow_error.
double kummer_m(double a, double b, double z);

// exp(-z) * 1F1(a, b, z): never overflows for a, b in the supported range,
// usable at arbitrarily large z (series with renormalization, or the large-z
// asymptotic expansion once it reaches full accuracy).
double kummer_m_scaled(double a, double b, double z);

struct UResult {
    double value = 0.0;
    double err_est = 0.0;
    bool via_transform = false;  // reached through U(a,b,z)=z^{1-b}U(a-b+1,2-b,z)
};

// Tricomi U(a, b, z) for z > 0. Certified domain: a > 0 via the Laplace
// integral representation, plus a <= 0 cases the z^{1-b} transform maps onto
// it. Anything else -> std::domain_error.
double kummer_u(double a, double b, double z);
UResult kummer_u_ex(double a, double b, double z);

}  // namespace fdrlos
