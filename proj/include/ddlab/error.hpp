#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ddlab {

using Complex = std::complex<double>;

enum class ErrorKind {
  invalid_argument,
  length_insufficient,
  degenerate,
  basis_mismatch,
  tail_too_large,
  insufficient_derivatives,
  containment,
  spill_too_large,
  convergence_failure,
  no_convergence,
  not_weighted,
  precondition,
  config_parse,
  io,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` tells callers which
/// contract was broken.
class LabError : public std::runtime_error {
 public:
  LabError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ddlab
