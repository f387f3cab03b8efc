#pragma once

#include <stdexcept>
#include <string>

namespace kickwig {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A truncation (ladder half-width, Fourier cutoff or slice radius) was too
/// small for the requested accuracy. `measured` is the offending tail.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double measured)
      : Error(what), measured_(measured) {}
  double measured() const noexcept { return measured_; }

 private:
  double measured_;
};

}  // namespace kickwig
