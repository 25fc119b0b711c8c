#include "vpfv/exact_sum.hpp"

#include <bit>
#include <cmath>

namespace vpfv {

namespace {
constexpr std::int64_t flush_after = std::int64_t{1} << 30;
}

void ExactSum::add(double x) {
  ++count_;
  const auto u = std::bit_cast<std::uint64_t>(x);
  const int e = static_cast<int>((u >> 52) & 0x7ff);
  std::uint64_t m = u & ((std::uint64_t{1} << 52) - 1);
  if (e == 0x7ff) {
    special_ += x;
    return;
  }
  int b = 0;
  if (e == 0) {
    if (m == 0) return;
  } else {
    m |= std::uint64_t{1} << 52;
    b = e - 1;
  }
  // x = m * 2^(b - 1074)
  const int li = b >> 5;
  const unsigned __int128 w = static_cast<unsigned __int128>(m) << (b & 31);
  const auto c0 = static_cast<std::int64_t>(static_cast<std::uint64_t>(w) & 0xffffffffu);
  const auto c1 = static_cast<std::int64_t>(static_cast<std::uint64_t>(w >> 32) & 0xffffffffu);
  const auto c2 = static_cast<std::int64_t>(static_cast<std::uint64_t>(w >> 64));
  if (u >> 63) {
    l_[li] -= c0;
    l_[li + 1] -= c1;
    l_[li + 2] -= c2;
  } else {
    l_[li] += c0;
    l_[li + 1] += c1;
    l_[li + 2] += c2;
  }
  if (++pending_ >= flush_after) normalize();
}

void ExactSum::normalize() {
  for (int i = 0; i < limbs - 1; ++i) {
    const std::int64_t carry = l_[i] >> 32;
    l_[i] -= carry * (std::int64_t{1} << 32);
    l_[i + 1] += carry;
  }
  pending_ = 0;
}

void ExactSum::merge(const ExactSum& o) {
  ExactSum b = o;
  b.normalize();
  normalize();
  for (int i = 0; i < limbs; ++i) l_[i] += b.l_[i];
  normalize();
  count_ += o.count_;
  special_ += o.special_;
}

double ExactSum::value() const {
  if (special_ != 0.0 || std::isnan(special_)) return special_;
  ExactSum t = *this;
  t.normalize();
  double sign = 1.0;
  if (t.l_[limbs - 1] < 0) {
    sign = -1.0;
    for (auto& x : t.l_) x = -x;
    t.normalize();
  }
  int top = limbs - 1;
  while (top >= 0 && t.l_[top] == 0) --top;
  if (top < 0) return 0.0;
  // Three limbs carry 64+ significant bits; the lower ones only matter for
  // ties, resolved here with a sticky bit folded into the last limb.
  double r = 0.0;
  const int lowest = top >= 2 ? top - 2 : 0;
  std::int64_t last = t.l_[lowest];
  bool sticky = false;
  for (int i = 0; i < lowest; ++i) sticky |= t.l_[i] != 0;
  if (sticky) last |= 1;
  for (int i = lowest; i <= top; ++i) {
    const double part = static_cast<double>(i == lowest ? last : t.l_[i]);
    r += std::ldexp(part, 32 * i - 1074);
  }
  return sign * r;
}

}  // namespace vpfv
