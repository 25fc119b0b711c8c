#pragma once

#include <array>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace vpfv {

/// Term list of a fused stage: out = sum coef * buffer + dt * L(in).
template <class Buffer>
using Terms = std::array<std::pair<double, const Buffer*>, 3>;

/// A System provides
///   using Buffer = ...;
///   void stage(const Buffer& in, const Terms<Buffer>& terms, double dt, Buffer& out);
///   void combine(Buffer& out, const Terms<Buffer>& terms);   // pointwise, interior only
///   Buffer make_buffer(const Buffer& like);

/// Classical Butcher-tableau form of the 3/8 rule. Allocates four stage
/// buffers plus one scratch; reference path only.
template <class System>
void rk4_butcher_step(System& sys, typename System::Buffer& f0, double dt) {
  using B = typename System::Buffer;
  B k0 = sys.make_buffer(f0), k1 = sys.make_buffer(f0), k2 = sys.make_buffer(f0), k3 = sys.make_buffer(f0);
  B y = sys.make_buffer(f0);
  const Terms<B> none{{{0.0, nullptr}, {0.0, nullptr}, {0.0, nullptr}}};
  sys.stage(f0, none, 1.0, k0);
  sys.combine(y, {{{1.0, &f0}, {dt / 3.0, &k0}, {0.0, nullptr}}});
  sys.stage(y, none, 1.0, k1);
  sys.combine(y, {{{1.0, &f0}, {dt, &k1}, {-dt / 3.0, &k0}}});
  sys.stage(y, none, 1.0, k2);
  // f0 + dt (K0 - K1 + K2)
  sys.combine(y, {{{1.0, &f0}, {dt, &k0}, {-dt, &k1}}});
  sys.combine(y, {{{1.0, &y}, {dt, &k2}, {0.0, nullptr}}});
  sys.stage(y, none, 1.0, k3);
  sys.combine(y, {{{1.0, &k0}, {3.0, &k1}, {3.0, &k2}}});
  sys.combine(y, {{{1.0, &y}, {1.0, &k3}, {0.0, nullptr}}});
  sys.combine(f0, {{{1.0, &f0}, {dt / 8.0, &y}, {0.0, nullptr}}});
}

/// Three-buffer 3/8 rule:
///   f1   <- f0 + dt/3 L(f0)
///   fout <- 2 f0 - f1 + dt L(f1)
///   f1   <- 2 f1 - fout + dt L(fout)
///   fout <- (6 fout + 3 f1 - f0 + dt L(f1)) / 8
/// Stage values equal those of the tableau form exactly in exact arithmetic.
/// The result is left in fout.
template <class System>
void rk4_38_low_storage_step(System& sys, typename System::Buffer& f0, typename System::Buffer& f1,
                             typename System::Buffer& fout, double dt) {
  using B = typename System::Buffer;
  sys.stage(f0, Terms<B>{{{1.0, &f0}, {0.0, nullptr}, {0.0, nullptr}}}, dt / 3.0, f1);
  sys.stage(f1, Terms<B>{{{2.0, &f0}, {-1.0, &f1}, {0.0, nullptr}}}, dt, fout);
  sys.stage(fout, Terms<B>{{{2.0, &f1}, {-1.0, &fout}, {0.0, nullptr}}}, dt, f1);
  sys.stage(f1, Terms<B>{{{0.75, &fout}, {0.375, &f1}, {-0.125, &f0}}}, dt / 8.0, fout);
}

/// Largest stable step sigma / sum_d (max|A^d| / h_d) per species, minimized
/// over species and scaled by `safety`. Infinity when every speed is zero.
double max_stable_dt(std::span<const std::vector<double>> speed_over_h, double sigma, double safety = 1.0);

/// The max-norm bound sigma / (D max_d (max|A^d| / h_d)), for comparison.
double max_stable_dt_linf(std::span<const std::vector<double>> speed_over_h, double sigma, double safety = 1.0);

inline constexpr double default_safety = 0.9;

}  // namespace vpfv
