#pragma once

#include <stdexcept>
#include <string>

namespace vpfv {

enum class ErrorKind {
  dimension_mismatch,
  invalid_extent,
  out_of_range,
  missing_snapshot,
  non_finite,
  divisibility,
  rank_mismatch,
  length_mismatch,
  not_converged,
  parse,
  io,
  unsupported,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace vpfv
