#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace lpscma {

using cd = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// golden ratio conjugate, the GAM angle increment in turns
constexpr double kGoldenAngleTurns = (1.0 - 2.2360679774997896964091736687747) / 2.0;

}  // namespace lpscma
