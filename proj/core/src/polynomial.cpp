#include <algorithm>
#include <string>

#include "osc/error.hpp"
#include "osc/pte.hpp"

namespace osc {

mpz_class f_r_exact(long M, long r) {
  if (M < 1 || r < 0) fail(ErrorKind::invalid_parameters, "f_r needs M >= 1 and r >= 0");
  const mpz_class four_m2 = mpz_class(4) * M * M;
  const auto ur = static_cast<unsigned long>(r);
  mpz_class term;
  mpz_pow_ui(term.get_mpz_t(), four_m2.get_mpz_t(), ur);
  mpz_class side = 0;  // ℓ = 1 .. 2M-1, counted twice
  for (long ell = 1; ell < 2 * M; ++ell) {
    const mpz_class base = four_m2 - mpz_class(ell) * ell;
    mpz_class power;
    mpz_pow_ui(power.get_mpz_t(), base.get_mpz_t(), ur);
    if (ell % 2 == 0) {
      side += power;
    } else {
      side -= power;
    }
  }
  return term + 2 * side;
}

long IntegerPolynomial::degree() const {
  for (long i = static_cast<long>(coeffs.size()) - 1; i >= 0; --i) {
    if (coeffs[static_cast<std::size_t>(i)] != 0) return i;
  }
  return -1;
}

mpz_class IntegerPolynomial::operator()(const mpz_class& M) const {
  mpz_class acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * M + *it;
  return acc;
}

mpz_class IntegerPolynomial::max_abs_coeff() const {
  mpz_class best = 0;
  for (const mpz_class& c : coeffs) best = std::max<mpz_class>(best, abs(c));
  return best;
}

mpz_class factorial(long n) {
  if (n < 0) fail(ErrorKind::invalid_parameters, "factorial of a negative number");
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

DegreeReport detect_degree(long r, long M_lo, long count) {
  if (r < 1) fail(ErrorKind::invalid_parameters, "detect_degree needs r >= 1");
  if (M_lo < 1) fail(ErrorKind::invalid_parameters, "detect_degree needs M_lo >= 1");
  if (count < r + 3) {
    fail(ErrorKind::invalid_parameters, "detect_degree needs at least r + 3 = " + std::to_string(r + 3) + " samples");
  }

  std::vector<mpz_class> samples;
  samples.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) samples.push_back(f_r_exact(M_lo + i, r));

  // leading[j] = Δ^j f(M_lo); degree = last row with a nonzero entry.
  std::vector<mpz_class> row = samples;
  std::vector<mpz_class> leading;
  long degree = -1;
  for (long j = 0; !row.empty(); ++j) {
    leading.push_back(row.front());
    if (std::any_of(row.begin(), row.end(), [](const mpz_class& v) { return v != 0; })) degree = j;
    for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = row[i + 1] - row[i];
    row.pop_back();
  }
  if (degree > count - 3) {
    fail(ErrorKind::degree_mismatch, "finite differences of f_" + std::to_string(r) + " do not vanish within " +
                                         std::to_string(count) + " samples");
  }

  // Newton forward form Σ leading[j] C(M - M_lo, j), expanded in powers of M.
  std::vector<mpq_class> monomial(static_cast<std::size_t>(std::max(degree, 0L)) + 1, 0);
  std::vector<mpq_class> basis = {mpq_class(1)};
  for (long j = 0; j <= degree; ++j) {
    for (std::size_t i = 0; i < basis.size(); ++i) monomial[i] += basis[i] * leading[static_cast<std::size_t>(j)];
    // basis *= (M - M_lo - j) / (j + 1)
    std::vector<mpq_class> next(basis.size() + 1, 0);
    const mpq_class shift(M_lo + j);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      next[i + 1] += basis[i];
      next[i] -= basis[i] * shift;
    }
    for (mpq_class& v : next) v /= (j + 1);
    basis = std::move(next);
  }

  DegreeReport report;
  report.r = r;
  report.degree = degree;
  for (mpq_class& c : monomial) {
    c.canonicalize();
    if (c.get_den() != 1) {
      fail(ErrorKind::degree_mismatch, "interpolant of f_" + std::to_string(r) + " has non-integer coefficient " +
                                           c.get_str());
    }
    report.poly.coeffs.push_back(c.get_num());
  }
  for (long i = 0; i < count; ++i) {
    if (report.poly(mpz_class(M_lo + i)) != samples[static_cast<std::size_t>(i)]) {
      fail(ErrorKind::degree_mismatch, "interpolant does not reproduce f_" + std::to_string(r));
    }
  }
  const long expected = r % 2 == 0 ? r - 1 : r;
  if (degree != expected) {
    fail(ErrorKind::degree_mismatch, "f_" + std::to_string(r) + " has degree " + std::to_string(degree) +
                                         ", expected " + std::to_string(expected));
  }
  return report;
}

bool coefficient_bound_check(long r, const IntegerPolynomial& poly, long C) {
  return poly.max_abs_coeff() <= factorial(2 * r) * C;
}

}  // namespace osc
