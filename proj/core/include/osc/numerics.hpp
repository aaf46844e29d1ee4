#pragma once

// Arbitrary-precision real/complex arithmetic shared by every module.
//
// Real is an owning RAII handle around an mpfr_t. Every value carries its own
// binary precision; binary operations produce a result at the larger of the two
// operand precisions and functions keep the precision of their argument. All
// rounding is to nearest. Non-finite results are reported as ErrorKind::overflow
// (or ErrorKind::domain) by the operations that can produce them.

#include <mpfr.h>
#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

namespace osc {

using Bits = mpfr_prec_t;

/// Working precision for approximate arithmetic.
struct PrecisionContext {
  Bits bits = 128;
  Bits guard_bits = 32;

  PrecisionContext() = default;
  explicit PrecisionContext(Bits bits_, Bits guard = 32);

  /// Precision used for accumulation: bits + guard_bits.
  Bits working_bits() const noexcept { return bits + guard_bits; }

  /// Same context with `extra` more bits of target precision.
  PrecisionContext refined(Bits extra) const { return PrecisionContext(bits + extra, guard_bits); }

  /// Relative tolerance 2^-(bits - slack), as a double.
  double tolerance(Bits slack = 0) const;
};

/// max(128, ceil(c * sqrt(x) * log2(e)) + 96): enough bits that e^{c sqrt x}
/// keeps 96 fractional bits after cancellation down to O(1).
Bits required_bits(double x, double c);

class Real {
 public:
  explicit Real(Bits bits = 128);
  Real(long value, Bits bits);
  Real(int value, Bits bits) : Real(static_cast<long>(value), bits) {}
  Real(double value, Bits bits);
  Real(const mpz_class& value, Bits bits);
  Real(const mpq_class& value, Bits bits);

  /// Parses a decimal (or "inf"/"nan"-free scientific) literal.
  static Real from_string(std::string_view text, Bits bits);
  static Real pi(Bits bits);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  Bits precision() const noexcept { return mpfr_get_prec(value_); }
  Real with_precision(Bits bits) const;

  mpfr_srcptr get() const noexcept { return value_; }
  mpfr_ptr get() noexcept { return value_; }

  double to_double() const noexcept { return mpfr_get_d(value_, MPFR_RNDN); }
  /// Natural log of |x| without leaving the big-exponent range; -inf for 0.
  double log_abs() const;
  /// Scientific decimal string with `digits` significant digits (0: enough
  /// digits for the value's precision).
  std::string to_string(int digits = 0) const;

  int sign() const noexcept { return mpfr_sgn(value_); }
  bool is_zero() const noexcept { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const noexcept { return mpfr_number_p(value_) != 0; }
  bool is_integer() const noexcept { return mpfr_integer_p(value_) != 0; }

  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);
  Real& operator*=(long rhs);
  Real& operator/=(long rhs);

  Real operator-() const;

 private:
  mpfr_t value_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator*(const Real& a, long b);
Real operator*(long a, const Real& b);
Real operator/(const Real& a, long b);
Real operator+(const Real& a, long b);
Real operator-(const Real& a, long b);

bool operator<(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);
bool operator>=(const Real& a, const Real& b);
bool operator==(const Real& a, const Real& b);
bool operator!=(const Real& a, const Real& b);

Real abs(const Real& x);
Real sqrt(const Real& x);  // domain error for x < 0
Real exp(const Real& x);   // overflow error when the exponent range is exceeded
Real log(const Real& x);   // domain error for x <= 0
Real sin(const Real& x);
Real cos(const Real& x);
Real sinh(const Real& x);
Real cosh(const Real& x);
Real atan2(const Real& y, const Real& x);
Real pow(const Real& base, const Real& exponent);
Real pow(const Real& base, long exponent);
Real square(const Real& x);
Real max(const Real& a, const Real& b);
mpz_class floor_to_integer(const Real& x);

/// Relative difference |a-b| / max(|a|,|b|) (0 when both are zero), as double.
double relative_difference(const Real& a, const Real& b);

/// Complex number as a pair of Reals.
struct Complex {
  Real re;
  Real im;

  explicit Complex(Bits bits = 128) : re(bits), im(bits) {}
  Complex(Real re_, Real im_) : re(std::move(re_)), im(std::move(im_)) {}
  explicit Complex(const Real& re_) : re(re_), im(re_.precision()) {}

  Bits precision() const noexcept { return std::max(re.precision(), im.precision()); }
  bool is_finite() const noexcept { return re.is_finite() && im.is_finite(); }

  Complex& operator+=(const Complex& rhs);
  Complex& operator-=(const Complex& rhs);
  Complex operator-() const { return Complex(-re, -im); }
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator*(const Real& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Real& b);

Real abs(const Complex& z);
Complex conj(const Complex& z);
Complex exp(const Complex& z);
/// Principal logarithm, imaginary part in (-pi, pi].
Complex log(const Complex& z);
/// Principal power exp(p * log z); 0^p = 0 for p > 0.
Complex pow(const Complex& z, const Real& p);
Complex pow(const Complex& z, long p);
/// sin(pi z).
Complex sin_pi(const Complex& z);

/// Square root with Re >= 0; on the imaginary axis the root with Im >= 0.
Complex complex_sqrt_principal(const Complex& w);

/// Modified Bessel function I_alpha(z), alpha in {0, 1}, z >= 0, by the
/// ascending series. Evaluated at ctx.working_bits().
Real bessel_i(int alpha, const Real& z, const PrecisionContext& ctx);

/// Same series for complex argument; the caller is responsible for enough
/// precision when |z| is much larger than Re z.
Complex bessel_i(int alpha, const Complex& z, const PrecisionContext& ctx);

}  // namespace osc
