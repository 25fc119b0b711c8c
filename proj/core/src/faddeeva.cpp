#include "vpfv/faddeeva.hpp"

#include <cmath>
#include <numbers>

#include "vpfv/error.hpp"

namespace vpfv {

std::complex<double> faddeeva_w(std::complex<double> z) {
  constexpr double factor = 1.12837916709551257388;  // 2 / sqrt(pi)
  constexpr double rmaxreal = 0.5e154;
  constexpr double rmaxexp = 708.503061461606;
  constexpr double rmaxgoni = 3.53711887601422e15;

  const double xi = z.real(), yi = z.imag();
  const double xabs = std::abs(xi), yabs = std::abs(yi);
  if (!std::isfinite(xi) || !std::isfinite(yi) || xabs > rmaxreal || yabs > rmaxreal)
    throw Error(ErrorKind::out_of_range, "Faddeeva argument too large");
  const double x = xabs / 6.3, y = yabs / 4.4;
  double qrho = x * x + y * y;
  const double xabsq = xabs * xabs;
  double xquad = xabsq - yabs * yabs;
  const double yquad = 2.0 * xabs * yabs;

  double u = 0.0, v = 0.0, u2 = 0.0, v2 = 0.0;
  const bool small = qrho < 0.085264;
  if (small) {
    // power series
    qrho = (1.0 - 0.85 * y) * std::sqrt(qrho);
    const int n = static_cast<int>(std::lround(6.0 + 72.0 * qrho));
    int j = 2 * n + 1;
    double xsum = 1.0 / j, ysum = 0.0;
    for (int i = n; i >= 1; --i) {
      j -= 2;
      const double xaux = (xsum * xquad - ysum * yquad) / i;
      ysum = (xsum * yquad + ysum * xquad) / i;
      xsum = xaux + 1.0 / j;
    }
    const double u1 = -factor * (xsum * yabs + ysum * xabs) + 1.0;
    const double v1 = factor * (xsum * xabs - ysum * yabs);
    const double daux = std::exp(-xquad);
    u2 = daux * std::cos(yquad);
    v2 = -daux * std::sin(yquad);
    u = u1 * u2 - v1 * v2;
    v = u1 * v2 + v1 * u2;
  } else {
    double h = 0.0, h2 = 0.0, qlambda = 0.0;
    int kapn = 0, nu = 0;
    if (qrho > 1.0) {
      qrho = std::sqrt(qrho);
      nu = static_cast<int>(3.0 + 1442.0 / (26.0 * qrho + 77.0));
    } else {
      qrho = (1.0 - y) * std::sqrt(1.0 - qrho);
      h = 1.88 * qrho;
      h2 = 2.0 * h;
      kapn = static_cast<int>(std::lround(7.0 + 34.0 * qrho));
      nu = static_cast<int>(std::lround(16.0 + 26.0 * qrho));
    }
    const bool b = h > 0.0;
    if (b) qlambda = std::pow(h2, kapn);
    double rx = 0.0, ry = 0.0, sx = 0.0, sy = 0.0;
    for (int n = nu; n >= 0; --n) {
      const double np1 = n + 1.0;
      double tx = yabs + h + np1 * rx;
      const double ty = xabs - np1 * ry;
      const double c = 0.5 / (tx * tx + ty * ty);
      rx = c * tx;
      ry = c * ty;
      if (b && n <= kapn) {
        tx = qlambda + sx;
        sx = rx * tx - ry * sy;
        sy = ry * tx + rx * sy;
        qlambda /= h2;
      }
    }
    if (h == 0.0) {
      u = factor * rx;
      v = factor * ry;
    } else {
      u = factor * sx;
      v = factor * sy;
    }
    if (yabs == 0.0) u = std::exp(-xabs * xabs);
  }

  if (yi < 0.0) {
    if (small) {
      u2 *= 2.0;
      v2 *= 2.0;
    } else {
      xquad = -xquad;
      if (yquad > rmaxgoni || xquad > rmaxexp)
        throw Error(ErrorKind::out_of_range, "Faddeeva overflow in the lower half plane");
      const double w1 = 2.0 * std::exp(xquad);
      u2 = w1 * std::cos(yquad);
      v2 = -w1 * std::sin(yquad);
    }
    u = u2 - u;
    v = v2 - v;
    if (xi > 0.0) v = -v;
  } else if (xi < 0.0) {
    v = -v;
  }
  return {u, v};
}

std::complex<double> plasma_z(std::complex<double> zeta) {
  return std::complex<double>(0.0, std::sqrt(std::numbers::pi)) * faddeeva_w(zeta);
}

std::complex<double> plasma_r(std::complex<double> zeta) {
  if (std::abs(zeta) < 10.0) return 1.0 + zeta * plasma_z(zeta);
  // Z = -1 / (zeta - t), t = (1/2) / (zeta - 1 / (zeta - (3/2) / (zeta - ...)))
  std::complex<double> t = 0.0;
  for (int j = 40; j >= 1; --j) t = (0.5 * j) / (zeta - t);
  std::complex<double> r = -t / (zeta - t);
  if (zeta.imag() < 0.0) {
    const std::complex<double> e2 = -zeta * zeta;
    if (e2.real() > 700.0) throw Error(ErrorKind::out_of_range, "plasma dispersion function overflow");
    r += std::complex<double>(0.0, 2.0 * std::sqrt(std::numbers::pi)) * zeta * std::exp(e2);
  }
  return r;
}

std::complex<double> plasma_z_prime(std::complex<double> zeta) { return -2.0 * plasma_r(zeta); }

}  // namespace vpfv
