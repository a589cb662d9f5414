#include "ddlab/error.hpp"

namespace ddlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::length_insufficient: return "length_insufficient";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::basis_mismatch: return "basis_mismatch";
    case ErrorKind::tail_too_large: return "tail_too_large";
    case ErrorKind::insufficient_derivatives: return "insufficient_derivatives";
    case ErrorKind::containment: return "containment";
    case ErrorKind::spill_too_large: return "spill_too_large";
    case ErrorKind::convergence_failure: return "convergence_failure";
    case ErrorKind::no_convergence: return "no_convergence";
    case ErrorKind::not_weighted: return "not_weighted";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::config_parse: return "config_parse";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace ddlab
