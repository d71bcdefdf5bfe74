#pragma once

#include <stdexcept>
#include <string>

namespace vkoga {

/// Malformed input: dimension mismatches, empty point sets, out-of-range
/// parameters, unparsable files.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown of a kernel system. Carries the offending pivot
/// (a squared power value or a Cholesky pivot, depending on the caller).
class StabilityError : public std::runtime_error {
 public:
  StabilityError(const std::string& what, double pivot)
      : std::runtime_error(what), pivot_(pivot) {}

  [[nodiscard]] double pivot() const noexcept { return pivot_; }

 private:
  double pivot_;
};

}  // namespace vkoga
