#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace osc {

enum class ErrorKind {
  domain,
  overflow,
  empty_range,
  precision_insufficient,
  out_of_range,
  invalid_parameters,
  degree_mismatch,
  non_convergence,
  pole_proximity,
  resource,
  degenerate_fit,
  io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for every failure the library reports.
/// The kind is what callers (and the CLI exit-code mapping) switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace osc
