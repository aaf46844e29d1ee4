#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "osc/numerics.hpp"

namespace osc {

/// Exact closed-form scalar  coefficient * pi^pi_power * sqrt(radicand).
///
/// Covers every constant the kernels need (1, pi*sqrt(2/3), pi/sqrt(6),
/// 2*pi/sqrt(15), ...) while staying exact, so each evaluation can be done at
/// whatever working precision the caller asks for.
class Constant {
 public:
  Constant() = default;
  Constant(mpq_class coefficient);  // NOLINT(google-explicit-constructor)
  Constant(long value) : Constant(mpq_class(value)) {}  // NOLINT
  Constant(mpq_class coefficient, int pi_power, mpq_class radicand);

  static Constant pi_sqrt(const mpq_class& radicand) { return Constant(1, 1, radicand); }

  /// Accepts "<q>", "<q>*pi", "pi", "pi*sqrt(<q>)", "pi/sqrt(<q>)",
  /// "<q>*pi*sqrt(<q>)", "<q>*pi/sqrt(<q>)", "sqrt(<q>)" where <q> is an
  /// integer, a fraction a/b or a finite decimal.
  static Constant parse(std::string_view text);

  const mpq_class& coefficient() const noexcept { return coefficient_; }
  int pi_power() const noexcept { return pi_power_; }
  const mpq_class& radicand() const noexcept { return radicand_; }

  Real evaluate(Bits bits) const;
  double to_double() const { return evaluate(64).to_double(); }
  int sign() const { return sgn(coefficient_); }
  bool is_zero() const { return coefficient_ == 0; }
  std::string to_string() const;

  friend bool operator==(const Constant& a, const Constant& b) {
    return a.coefficient_ == b.coefficient_ && a.pi_power_ == b.pi_power_ && a.radicand_ == b.radicand_;
  }

 private:
  mpq_class coefficient_{0};
  int pi_power_ = 0;
  mpq_class radicand_{1};
};

/// Parses an exact rational from "a", "a/b", or a finite decimal "12.5e-3".
mpq_class parse_rational(std::string_view text);
std::string to_string(const mpq_class& value);

}  // namespace osc
