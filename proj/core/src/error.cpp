#include "osc/error.hpp"

namespace osc {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::empty_range: return "empty_range";
    case ErrorKind::precision_insufficient: return "precision_insufficient";
    case ErrorKind::out_of_range: return "out_of_range";
    case ErrorKind::invalid_parameters: return "invalid_parameters";
    case ErrorKind::degree_mismatch: return "degree_mismatch";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::pole_proximity: return "pole_proximity";
    case ErrorKind::resource: return "resource";
    case ErrorKind::degenerate_fit: return "degenerate_fit";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace osc
