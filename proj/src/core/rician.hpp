#pragma once

#include <cmath>

#include "core/types.hpp"

namespace lpscma {

// Per-resource terms of the Rician pairwise distance. tau is the squared
// element-wise distance on one resource.
//
//   d1 = kappa*tau / (1 + kappa + tau/(4 N0))        (LoS part)
//   d2 = 4 N0 * ln(1 + tau/(4 N0 (1 + kappa)))       (scattered part)
inline double rician_d1_term(double tau, double kappa, double n0) {
  return kappa * tau / (1.0 + kappa + tau / (4.0 * n0));
}

inline double rician_d2_term(double tau, double kappa, double n0) {
  return 4.0 * n0 * std::log1p(tau / (4.0 * n0 * (1.0 + kappa)));
}

inline double rician_d2_sum_term(double tau, double kappa, double n0) {
  return rician_d1_term(tau, kappa, n0) + rician_d2_term(tau, kappa, n0);
}

}  // namespace lpscma
