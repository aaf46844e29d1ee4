#include "osc/pte.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "osc/error.hpp"

namespace osc {

namespace {

mpz_class pow_z(const mpz_class& base, unsigned long exponent) {
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

Bits bits_for(const mpz_class& value) {
  return std::max<Bits>(128, static_cast<Bits>(mpz_sizeinbase(value.get_mpz_t(), 2)) + 64);
}

}  // namespace

mpz_class pte_base_N(long n, long m) {
  if (n < 1 || m < 1) fail(ErrorKind::invalid_parameters, "PTE construction needs n >= 1 and m >= 1");
  const mpz_class target = pow_z(mpz_class(2 * n), static_cast<unsigned long>(2 * m));
  mpz_class root;
  mpz_root(root.get_mpz_t(), target.get_mpz_t(), static_cast<unsigned long>(2 * m + 1));
  return root;
}

PTEPair construct_pair(long n, long m, bool allow_adjust) {
  if (n < 2 || m < 1) fail(ErrorKind::invalid_parameters, "PTE construction needs n >= 2 and m >= 1");
  PTEPair pair;
  pair.n = n;
  pair.m = m;
  pair.N = pte_base_N(n, m);
  const unsigned long power = static_cast<unsigned long>(2 * m + 1);
  const mpz_class largest_offset = mpz_class(2 * n - 1) * (2 * n - 1);
  if (pow_z(pair.N, power) <= largest_offset && allow_adjust) {
    pair.N += 1;
    pair.adjusted = true;
  }
  const mpz_class top = pow_z(pair.N, power);
  if (top <= largest_offset) {
    fail(ErrorKind::invalid_parameters, "N^(2m+1) = " + top.get_str() + " <= (2n-1)^2 = " +
                                            largest_offset.get_str() + " for n = " + std::to_string(n) +
                                            ", m = " + std::to_string(m));
  }
  pair.xs.reserve(static_cast<std::size_t>(n));
  pair.ys.reserve(static_cast<std::size_t>(n));
  for (long i = 1; i <= n; ++i) {
    pair.xs.push_back(top - mpz_class(2 * i - 2) * (2 * i - 2));
    pair.ys.push_back(top - mpz_class(2 * i - 1) * (2 * i - 1));
  }
  return pair;
}

mpz_class power_sum_diff(const std::vector<mpz_class>& xs, const std::vector<mpz_class>& ys, long r) {
  if (r < 0) fail(ErrorKind::invalid_parameters, "power must be >= 0");
  mpz_class acc = 0;
  mpz_class term;
  for (const mpz_class& v : xs) {
    mpz_pow_ui(term.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(r));
    acc += term;
  }
  for (const mpz_class& v : ys) {
    mpz_pow_ui(term.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(r));
    acc -= term;
  }
  return acc;
}

mpz_class power_sum_diff(const PTEPair& pair, long r) { return power_sum_diff(pair.xs, pair.ys, r); }

long pte_k_regime(long n, long m) {
  if (n < 2 || m < 1) fail(ErrorKind::invalid_parameters, "k regime needs n >= 2 and m >= 1");
  const double exponent = 1.0 - 1.0 / static_cast<double>(2 * m + 1);
  return static_cast<long>(std::floor(std::pow(static_cast<double>(n), exponent) / std::log(static_cast<double>(n))));
}

std::vector<PTEBoundRow> verify_pte_bound(const PTEPair& pair, long r_max) {
  const long regime = pte_k_regime(pair.n, pair.m);
  std::vector<PTEBoundRow> rows;
  for (long r = 1; r <= r_max; ++r) {
    PTEBoundRow row;
    row.r = r;
    row.diff = power_sum_diff(pair, r);
    // N^{r(2m+1/2)} = √(N^{r(4m+1)}).
    const mpz_class square_of_bound = pow_z(pair.N, static_cast<unsigned long>(r * (4 * pair.m + 1)));
    const Bits bits = std::max(bits_for(row.diff), bits_for(square_of_bound));
    row.bound = sqrt(Real(square_of_bound, bits));
    row.ratio = abs(Real(row.diff, bits)) / row.bound;
    row.beyond_regime = r > regime;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<mpz_class> pair_gaps(const PTEPair& pair) {
  std::vector<mpz_class> gaps;
  gaps.reserve(pair.xs.size());
  for (std::size_t i = 0; i < pair.xs.size(); ++i) gaps.push_back(pair.xs[i] - pair.ys[i]);
  return gaps;
}

bool gaps_alternate(const PTEPair& pair) {
  const std::vector<mpz_class> gaps = pair_gaps(pair);
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    if (sgn(gaps[i]) * sgn(gaps[i - 1]) >= 0) return false;
  }
  return true;
}

mpq_class pigeonhole_c(long n, long k) {
  if (n < 1 || k < 1) fail(ErrorKind::invalid_parameters, "pigeonhole needs n, k >= 1");
  mpq_class c = 1 - mpq_class(2 * n, k * (k + 1));
  c.canonicalize();
  return c < 0 ? mpq_class(0) : c;
}

namespace {

long lattice_reach(const mpq_class& x, const mpq_class& T) {
  const mpq_class bound = x * T;
  if (bound < 1) fail(ErrorKind::invalid_parameters, "lemma sum needs x T >= 1");
  mpz_class root;
  const mpz_class whole = bound.get_num() / bound.get_den();
  mpz_sqrt(root.get_mpz_t(), whole.get_mpz_t());
  while (mpq_class(root * root) >= bound) --root;
  if (!root.fits_slong_p()) fail(ErrorKind::out_of_range, "x T too large");
  return root.get_si();
}

}  // namespace

LemmaSum lemma_sum(const mpq_class& x, const mpq_class& T, long k, const PrecisionContext& ctx) {
  if (T <= 0) fail(ErrorKind::invalid_parameters, "lemma sum needs T > 0");
  if (k < 0) fail(ErrorKind::invalid_parameters, "lemma sum needs k >= 0");
  LemmaSum out;
  out.ell_max = lattice_reach(x, T);
  const Bits bits = ctx.working_bits();
  if (k % 2 == 0) {
    const unsigned long half = static_cast<unsigned long>(k / 2);
    mpq_class acc = 0;
    mpq_class term;
    for (long ell = -out.ell_max; ell <= out.ell_max; ++ell) {
      const mpq_class base = x - mpq_class(ell * ell) / T;
      mpz_class num;
      mpz_class den;
      mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), half);
      mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), half);
      term = mpq_class(num, den);
      if (ell % 2 == 0) {
        acc += term;
      } else {
        acc -= term;
      }
    }
    acc.canonicalize();
    out.value = Real(acc, bits);
    out.exact = std::move(acc);
    return out;
  }
  Real acc(0L, bits);
  for (long ell = -out.ell_max; ell <= out.ell_max; ++ell) {
    const Real base(mpq_class(x - mpq_class(ell * ell) / T), bits);
    const Real term = pow(sqrt(base), k);
    if (ell % 2 == 0) {
      acc += term;
    } else {
      acc -= term;
    }
  }
  out.value = std::move(acc);
  return out;
}

Real lemma_rhs(const mpq_class& x, const mpq_class& T, long k, const mpq_class& u, Bits bits) {
  if (x <= 0 || T <= 0 || u < 0) fail(ErrorKind::invalid_parameters, "lemma bound needs x, T > 0 and u >= 0");
  const Real xr(x, bits);
  const Real Tr(T, bits);
  const Real ur(u, bits);
  const Real pi = Real::pi(bits);
  const Real decay = exp(log(xr) * k / 2L - pi * ur * sqrt(xr));
  const Real u2 = square(ur);
  const Real quartic = sqrt(sqrt((square(u2) + u2 * Tr * 4L) * square(xr)));
  return sqrt(xr * Tr) * (decay + quartic / sqrt(Tr));
}

}  // namespace osc
