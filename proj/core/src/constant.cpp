#include "osc/constant.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <string>

#include "osc/error.hpp"

namespace osc {

mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch) != 0; }),
          s.end());
  static const std::regex fraction(R"(^([+-]?\d+)(?:/(\d+))?$)");
  static const std::regex decimal(R"(^([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?$)");
  std::smatch m;
  if (std::regex_match(s, m, fraction)) {
    mpq_class q(mpz_class(m[1].str()), m[2].matched ? mpz_class(m[2].str()) : mpz_class(1));
    if (q.get_den() == 0) fail(ErrorKind::invalid_parameters, "zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  }
  if (std::regex_match(s, m, decimal) && (m[2].length() > 0 || m[3].length() > 0)) {
    const std::string int_part = m[2].str();
    const std::string frac_part = m[3].str();
    mpz_class digits(int_part + frac_part == "" ? "0" : int_part + frac_part);
    long exponent = m[4].matched ? std::stol(m[4].str()) : 0L;
    exponent -= static_cast<long>(frac_part.size());
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    mpq_class q = exponent < 0 ? mpq_class(digits, scale) : mpq_class(digits * scale);
    q.canonicalize();
    if (m[1].str() == "-") q = -q;
    return q;
  }
  fail(ErrorKind::invalid_parameters, "not a rational number: '" + s + "'");
}

std::string to_string(const mpq_class& value) { return value.get_str(); }

Constant::Constant(mpq_class coefficient) : coefficient_(std::move(coefficient)) {}

Constant::Constant(mpq_class coefficient, int pi_power, mpq_class radicand)
    : coefficient_(std::move(coefficient)), pi_power_(pi_power), radicand_(std::move(radicand)) {
  if (pi_power_ < 0 || pi_power_ > 2) fail(ErrorKind::invalid_parameters, "pi power must be 0, 1 or 2");
  if (radicand_ <= 0) fail(ErrorKind::invalid_parameters, "radicand must be positive");
}

Constant Constant::parse(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch) != 0; }),
          s.end());
  // [coef*] [pi] [(*|/)sqrt(q)]
  static const std::regex form(R"(^(?:([^*a-z]+?)\*?)?(pi)?(?:([*/]?)sqrt\(([^)]+)\))?$)");
  std::smatch m;
  if (!std::regex_match(s, m, form) || s.empty()) {
    fail(ErrorKind::invalid_parameters, "cannot parse constant '" + s + "'");
  }
  mpq_class coefficient = m[1].matched ? parse_rational(m[1].str()) : mpq_class(1);
  const int pi_power = m[2].matched ? 1 : 0;
  mpq_class radicand(1);
  if (m[4].matched) {
    radicand = parse_rational(m[4].str());
    if (radicand <= 0) fail(ErrorKind::invalid_parameters, "radicand must be positive in '" + s + "'");
    if (m[3].str() == "/") radicand = 1 / radicand;
  }
  if (!m[1].matched && !m[2].matched && !m[4].matched) {
    fail(ErrorKind::invalid_parameters, "cannot parse constant '" + s + "'");
  }
  return Constant(coefficient, pi_power, radicand);
}

Real Constant::evaluate(Bits bits) const {
  Real out(coefficient_, bits);
  if (pi_power_ > 0) out *= pow(Real::pi(bits), static_cast<long>(pi_power_));
  if (radicand_ != 1) out *= sqrt(Real(radicand_, bits));
  return out;
}

std::string Constant::to_string() const {
  std::string out = coefficient_.get_str();
  if (pi_power_ == 1) out += "*pi";
  if (pi_power_ == 2) out += "*pi^2";
  if (radicand_ != 1) out += "*sqrt(" + radicand_.get_str() + ")";
  return out;
}

}  // namespace osc
