#include "vpfv/time_stepping.hpp"

#include <algorithm>
#include <cmath>

namespace vpfv {

double max_stable_dt(std::span<const std::vector<double>> speed_over_h, double sigma, double safety) {
  double dt = std::numeric_limits<double>::infinity();
  for (const auto& s : speed_over_h) {
    double l1 = 0.0;
    for (double x : s) l1 += std::abs(x);
    if (l1 > 0.0) dt = std::min(dt, sigma / l1);
  }
  return dt * safety;
}

double max_stable_dt_linf(std::span<const std::vector<double>> speed_over_h, double sigma, double safety) {
  double dt = std::numeric_limits<double>::infinity();
  for (const auto& s : speed_over_h) {
    double m = 0.0;
    for (double x : s) m = std::max(m, std::abs(x));
    if (m > 0.0) dt = std::min(dt, sigma / (static_cast<double>(s.size()) * m));
  }
  return dt * safety;
}

}  // namespace vpfv
