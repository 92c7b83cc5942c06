#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace fdrlos {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kLn2 = 0.69314718055994530941723212145817657;
inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Numeric failure that should surface as exit code 2 at the CLI boundary.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The requested vertical contour cannot separate the two pole families.
struct contour_infeasible : numeric_error {
    using numeric_error::numeric_error;
};

// Contour integrand fails to decay within the allowed truncation height.
struct divergent_settings : numeric_error {
    using numeric_error::numeric_error;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline bool near_integer(double x, double tol = 1e-6) {
    return std::abs(x - std::round(x)) < tol;
}

}  // namespace fdrlos
