#include "osc/numerics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "osc/error.hpp"

namespace osc {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

Bits wider(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }

void require_finite(const Real& value, const char* what) {
  if (mpfr_nan_p(value.get())) fail(ErrorKind::domain, std::string(what) + ": result is NaN");
  if (mpfr_inf_p(value.get())) fail(ErrorKind::overflow, std::string(what) + ": result overflows");
}

}  // namespace

PrecisionContext::PrecisionContext(Bits bits_, Bits guard) : bits(bits_), guard_bits(guard) {
  if (bits < 128) fail(ErrorKind::invalid_parameters, "precision must be at least 128 bits");
  if (guard_bits < 1) fail(ErrorKind::invalid_parameters, "guard bits must be positive");
}

double PrecisionContext::tolerance(Bits slack) const {
  return std::ldexp(1.0, -static_cast<int>(bits - slack));
}

Bits required_bits(double x, double c) {
  if (!(x >= 0.0) || !(c >= 0.0)) fail(ErrorKind::domain, "required_bits needs x >= 0 and c >= 0");
  const double growth = c * std::sqrt(x) * std::numbers::log2e;
  const auto needed = static_cast<Bits>(std::ceil(growth)) + 96;
  return std::max<Bits>(128, needed);
}

// ---------------------------------------------------------------------------
// Real

Real::Real(Bits bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

Real::Real(long value, Bits bits) {
  mpfr_init2(value_, bits);
  mpfr_set_si(value_, value, kRnd);
}

Real::Real(double value, Bits bits) {
  mpfr_init2(value_, bits);
  mpfr_set_d(value_, value, kRnd);
}

Real::Real(const mpz_class& value, Bits bits) {
  mpfr_init2(value_, bits);
  mpfr_set_z(value_, value.get_mpz_t(), kRnd);
}

Real::Real(const mpq_class& value, Bits bits) {
  mpfr_init2(value_, bits);
  mpfr_set_q(value_, value.get_mpq_t(), kRnd);
}

Real Real::from_string(std::string_view text, Bits bits) {
  Real out(bits);
  const std::string owned(text);
  char* end = nullptr;
  if (!owned.empty()) mpfr_strtofr(out.value_, owned.c_str(), &end, 10, kRnd);
  if (owned.empty() || end == owned.c_str() || *end != '\0') {
    fail(ErrorKind::invalid_parameters, "not a decimal number: '" + owned + "'");
  }
  require_finite(out, "from_string");
  return out;
}

Real Real::pi(Bits bits) {
  Real out(bits);
  mpfr_const_pi(out.value_, kRnd);
  return out;
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, kRnd);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, kRnd);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

Real Real::with_precision(Bits bits) const {
  Real out(bits);
  mpfr_set(out.value_, value_, kRnd);
  return out;
}

double Real::log_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  long exponent = 0;
  const double mantissa = mpfr_get_d_2exp(&exponent, value_, kRnd);
  return std::log(std::fabs(mantissa)) + static_cast<double>(exponent) * std::numbers::ln2;
}

std::string Real::to_string(int digits) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return sign() < 0 ? "-inf" : "inf";
  if (is_zero()) return "0";
  if (digits <= 0) {
    digits = std::max(17, static_cast<int>(static_cast<double>(precision()) * 0.30102999566398120));
  }
  mpfr_exp_t exponent = 0;
  char* raw = mpfr_get_str(nullptr, &exponent, 10, static_cast<size_t>(digits), value_, kRnd);
  std::string mantissa(raw);
  mpfr_free_str(raw);
  std::string out;
  if (mantissa.front() == '-') {
    out.push_back('-');
    mantissa.erase(0, 1);
  }
  // Trim trailing zeros of the mantissa but keep one digit after the point.
  while (mantissa.size() > 2 && mantissa.back() == '0') mantissa.pop_back();
  out.push_back(mantissa[0]);
  if (mantissa.size() > 1) {
    out.push_back('.');
    out.append(mantissa, 1, std::string::npos);
  }
  const long e10 = static_cast<long>(exponent) - 1;
  if (e10 != 0) {
    out.push_back('e');
    out += std::to_string(e10);
  }
  return out;
}

Real& Real::operator+=(const Real& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), kRnd);
  mpfr_add(value_, value_, rhs.value_, kRnd);
  return *this;
}

Real& Real::operator-=(const Real& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), kRnd);
  mpfr_sub(value_, value_, rhs.value_, kRnd);
  return *this;
}

Real& Real::operator*=(const Real& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), kRnd);
  mpfr_mul(value_, value_, rhs.value_, kRnd);
  return *this;
}

Real& Real::operator/=(const Real& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), kRnd);
  mpfr_div(value_, value_, rhs.value_, kRnd);
  return *this;
}

Real& Real::operator*=(long rhs) {
  mpfr_mul_si(value_, value_, rhs, kRnd);
  return *this;
}

Real& Real::operator/=(long rhs) {
  mpfr_div_si(value_, value_, rhs, kRnd);
  return *this;
}

Real Real::operator-() const {
  Real out(precision());
  mpfr_neg(out.value_, value_, kRnd);
  return out;
}

Real operator+(const Real& a, const Real& b) {
  Real out(wider(a, b));
  mpfr_add(out.get(), a.get(), b.get(), kRnd);
  return out;
}

Real operator-(const Real& a, const Real& b) {
  Real out(wider(a, b));
  mpfr_sub(out.get(), a.get(), b.get(), kRnd);
  return out;
}

Real operator*(const Real& a, const Real& b) {
  Real out(wider(a, b));
  mpfr_mul(out.get(), a.get(), b.get(), kRnd);
  return out;
}

Real operator/(const Real& a, const Real& b) {
  Real out(wider(a, b));
  mpfr_div(out.get(), a.get(), b.get(), kRnd);
  return out;
}

Real operator*(const Real& a, long b) {
  Real out(a.precision());
  mpfr_mul_si(out.get(), a.get(), b, kRnd);
  return out;
}

Real operator*(long a, const Real& b) { return b * a; }

Real operator/(const Real& a, long b) {
  Real out(a.precision());
  mpfr_div_si(out.get(), a.get(), b, kRnd);
  return out;
}

Real operator+(const Real& a, long b) {
  Real out(a.precision());
  mpfr_add_si(out.get(), a.get(), b, kRnd);
  return out;
}

Real operator-(const Real& a, long b) {
  Real out(a.precision());
  mpfr_sub_si(out.get(), a.get(), b, kRnd);
  return out;
}

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }
bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }
bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }
bool operator!=(const Real& a, const Real& b) { return !(a == b); }

Real abs(const Real& x) {
  Real out(x.precision());
  mpfr_abs(out.get(), x.get(), kRnd);
  return out;
}

Real sqrt(const Real& x) {
  if (x.sign() < 0) fail(ErrorKind::domain, "sqrt of a negative number");
  Real out(x.precision());
  mpfr_sqrt(out.get(), x.get(), kRnd);
  return out;
}

Real exp(const Real& x) {
  Real out(x.precision());
  mpfr_exp(out.get(), x.get(), kRnd);
  require_finite(out, "exp");
  return out;
}

Real log(const Real& x) {
  if (x.sign() <= 0) fail(ErrorKind::domain, "log of a non-positive number");
  Real out(x.precision());
  mpfr_log(out.get(), x.get(), kRnd);
  return out;
}

Real sin(const Real& x) {
  Real out(x.precision());
  mpfr_sin(out.get(), x.get(), kRnd);
  return out;
}

Real cos(const Real& x) {
  Real out(x.precision());
  mpfr_cos(out.get(), x.get(), kRnd);
  return out;
}

Real sinh(const Real& x) {
  Real out(x.precision());
  mpfr_sinh(out.get(), x.get(), kRnd);
  require_finite(out, "sinh");
  return out;
}

Real cosh(const Real& x) {
  Real out(x.precision());
  mpfr_cosh(out.get(), x.get(), kRnd);
  require_finite(out, "cosh");
  return out;
}

Real atan2(const Real& y, const Real& x) {
  Real out(wider(y, x));
  mpfr_atan2(out.get(), y.get(), x.get(), kRnd);
  return out;
}

Real pow(const Real& base, const Real& exponent) {
  Real out(wider(base, exponent));
  mpfr_pow(out.get(), base.get(), exponent.get(), kRnd);
  require_finite(out, "pow");
  return out;
}

Real pow(const Real& base, long exponent) {
  Real out(base.precision());
  mpfr_pow_si(out.get(), base.get(), exponent, kRnd);
  require_finite(out, "pow");
  return out;
}

Real square(const Real& x) {
  Real out(x.precision());
  mpfr_sqr(out.get(), x.get(), kRnd);
  return out;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }

mpz_class floor_to_integer(const Real& x) {
  if (!x.is_finite()) fail(ErrorKind::domain, "floor of a non-finite value");
  mpz_class out;
  mpfr_get_z(out.get_mpz_t(), x.get(), MPFR_RNDD);
  return out;
}

double relative_difference(const Real& a, const Real& b) {
  const Real scale = max(abs(a), abs(b));
  if (scale.is_zero()) return 0.0;
  return (abs(a - b) / scale).to_double();
}

// ---------------------------------------------------------------------------
// Complex

Complex& Complex::operator+=(const Complex& rhs) {
  re += rhs.re;
  im += rhs.im;
  return *this;
}

Complex& Complex::operator-=(const Complex& rhs) {
  re -= rhs.re;
  im -= rhs.im;
  return *this;
}

Complex operator+(const Complex& a, const Complex& b) { return Complex(a.re + b.re, a.im + b.im); }
Complex operator-(const Complex& a, const Complex& b) { return Complex(a.re - b.re, a.im - b.im); }

Complex operator*(const Complex& a, const Complex& b) {
  return Complex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}

Complex operator*(const Complex& a, const Real& b) { return Complex(a.re * b, a.im * b); }
Complex operator*(const Real& a, const Complex& b) { return b * a; }

Complex operator/(const Complex& a, const Complex& b) {
  const Real denom = square(b.re) + square(b.im);
  if (denom.is_zero()) fail(ErrorKind::domain, "complex division by zero");
  return Complex((a.re * b.re + a.im * b.im) / denom, (a.im * b.re - a.re * b.im) / denom);
}

Complex operator/(const Complex& a, const Real& b) {
  if (b.is_zero()) fail(ErrorKind::domain, "complex division by zero");
  return Complex(a.re / b, a.im / b);
}

Real abs(const Complex& z) {
  Real out(z.precision());
  mpfr_hypot(out.get(), z.re.get(), z.im.get(), kRnd);
  return out;
}

Complex conj(const Complex& z) { return Complex(z.re, -z.im); }

Complex exp(const Complex& z) {
  const Bits bits = z.precision();
  const Real modulus = exp(z.re.with_precision(bits));
  Real s(bits), c(bits);
  mpfr_sin_cos(s.get(), c.get(), z.im.get(), kRnd);
  return Complex(modulus * c, modulus * s);
}

Complex log(const Complex& z) {
  const Real modulus = abs(z);
  if (modulus.is_zero()) fail(ErrorKind::domain, "log of complex zero");
  return Complex(log(modulus), atan2(z.im, z.re));
}

Complex pow(const Complex& z, const Real& p) {
  const Bits bits = std::max(z.precision(), p.precision());
  if (z.re.is_zero() && z.im.is_zero()) {
    if (p.sign() > 0) return Complex(bits);
    if (p.is_zero()) return Complex(Real(1L, bits));
    fail(ErrorKind::domain, "0 raised to a negative power");
  }
  const Complex l = log(z);
  return exp(Complex(l.re * p, l.im * p));
}

Complex pow(const Complex& z, long p) {
  const Bits bits = z.precision();
  Complex result(Real(1L, bits));
  Complex base = z;
  unsigned long e = p < 0 ? static_cast<unsigned long>(-p) : static_cast<unsigned long>(p);
  while (e != 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e != 0) base = base * base;
  }
  if (p < 0) return Complex(Real(1L, bits)) / result;
  return result;
}

Complex sin_pi(const Complex& z) {
  const Bits bits = z.precision();
  const Real pi = Real::pi(bits);
  const Real a = pi * z.re;
  const Real b = pi * z.im;
  Real s(bits), c(bits), sh(bits), ch(bits);
  mpfr_sin_cos(s.get(), c.get(), a.get(), kRnd);
  mpfr_sinh_cosh(sh.get(), ch.get(), b.get(), kRnd);
  Complex out(s * ch, c * sh);
  if (!out.is_finite()) fail(ErrorKind::overflow, "sin(pi z) overflows");
  return out;
}

Complex complex_sqrt_principal(const Complex& w) {
  if (!w.is_finite()) fail(ErrorKind::domain, "complex_sqrt_principal of a non-finite value");
  const Bits bits = w.precision();
  const Real modulus = abs(w);
  if (modulus.is_zero()) return Complex(bits);
  // t = sqrt((|w| + |Re w|) / 2) avoids cancellation on either half plane.
  Real t = sqrt((modulus + abs(w.re)) / 2L);
  const Real half_over_t = Real(1L, bits) / (t * 2L);
  if (w.re.sign() >= 0) {
    return Complex(t, w.im * half_over_t);
  }
  Real other = abs(w.im) * half_over_t;
  if (w.im.sign() < 0) t = -t;
  return Complex(std::move(other), std::move(t));
}

}  // namespace osc
