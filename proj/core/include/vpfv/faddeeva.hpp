#pragma once

#include <complex>

namespace vpfv {

/// w(z) = exp(-z^2) erfc(-i z), relative accuracy about 1e-14 over the
/// whole plane (series near the origin, continued fraction far out, Taylor
/// expansion about a shifted point in between).
std::complex<double> faddeeva_w(std::complex<double> z);

/// Plasma dispersion function Z(zeta) = i sqrt(pi) w(zeta).
std::complex<double> plasma_z(std::complex<double> zeta);

/// 1 + zeta Z(zeta) without the cancellation of the direct form at large
/// |zeta| (continued fraction there, plus the residue term below the axis).
std::complex<double> plasma_r(std::complex<double> zeta);

/// Z'(zeta) = -2 (1 + zeta Z(zeta)).
std::complex<double> plasma_z_prime(std::complex<double> zeta);

}  // namespace vpfv
