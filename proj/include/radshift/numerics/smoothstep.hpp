#pragma once

#include <array>

namespace radshift::num {

// Quintic smoothstep s(u) = 6u^5 - 15u^4 + 10u^3 on [0,1].
// s(0)=0, s(1)=1 and s', s'' vanish at both ends, so pieces built from it
// join C2 onto constants.
inline double smoothstep5(double u) {
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}
inline double smoothstep5_d1(double u) {
  const double w = u * (1.0 - u);
  return 30.0 * w * w;
}
inline double smoothstep5_d2(double u) {
  return 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
}

// Monomial coefficients, ascending powers of u.
inline constexpr std::array<double, 6> kSmoothstep5Coeffs = {0, 0, 0,
                                                             10, -15, 6};
inline constexpr std::array<double, 5> kSmoothstep5PrimeCoeffs = {0, 0, 30,
                                                                  -60, 30};

}  // namespace radshift::num
