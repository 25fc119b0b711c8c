#pragma once

#include <array>
#include <cstdint>

namespace vpfv {

/// Exact accumulator for doubles. The result depends only on the multiset of
/// added values, never on their order, which makes reductions bitwise
/// reproducible for any partitioning or schedule.
class ExactSum {
 public:
  void add(double x);
  void merge(const ExactSum& o);
  double value() const;
  bool empty() const { return count_ == 0; }

 private:
  static constexpr int limbs = 68;
  void normalize();

  std::array<std::int64_t, limbs> l_{};
  std::int64_t pending_ = 0;
  std::int64_t count_ = 0;
  double special_ = 0.0;
};

}  // namespace vpfv
