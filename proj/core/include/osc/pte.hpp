#pragma once

// Exact-integer Prouhet-Tarry-Escott experiments: the approximate pair
//   x_i = N^{2m+1} - (2i-2)²,  y_i = N^{2m+1} - (2i-1)²,
// its power-sum differences, the alternating sums
//   f_r(M) = Σ_{|ℓ|<2M} (-1)^ℓ (4M² - ℓ²)^r
// and the related lemma sums.

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "osc/numerics.hpp"

namespace osc {

struct PTEPair {
  long n = 0;
  long m = 0;
  mpz_class N;
  /// N was raised by one above ⌊(2n)^{2m/(2m+1)}⌋ to make every entry positive.
  bool adjusted = false;
  std::vector<mpz_class> xs;
  std::vector<mpz_class> ys;
};

/// ⌊(2n)^{2m/(2m+1)}⌋, i.e. the largest N with N^{2m+1} <= (2n)^{2m}.
mpz_class pte_base_N(long n, long m);

/// Invalid parameters if N^{2m+1} <= (2n-1)², after the optional N+1 step.
PTEPair construct_pair(long n, long m, bool allow_adjust = true);

/// Σ xs^r - Σ ys^r.
mpz_class power_sum_diff(const std::vector<mpz_class>& xs, const std::vector<mpz_class>& ys, long r);
mpz_class power_sum_diff(const PTEPair& pair, long r);

/// ⌊n^{1 - 1/(2m+1)} / log n⌋.
long pte_k_regime(long n, long m);

struct PTEBoundRow {
  long r = 0;
  mpz_class diff;
  Real bound;  // N^{r(2m + 1/2)}
  Real ratio;  // |diff| / bound
  bool beyond_regime = false;
};

std::vector<PTEBoundRow> verify_pte_bound(const PTEPair& pair, long r_max);

/// a_i - b_i for each i.
std::vector<mpz_class> pair_gaps(const PTEPair& pair);
/// True when consecutive gaps change sign at every step.
bool gaps_alternate(const PTEPair& pair);

mpz_class f_r_exact(long M, long r);

/// Integer coefficients, lowest degree first.
struct IntegerPolynomial {
  std::vector<mpz_class> coeffs;

  /// Index of the last nonzero coefficient; -1 for the zero polynomial.
  long degree() const;
  mpz_class operator()(const mpz_class& M) const;
  mpz_class max_abs_coeff() const;
};

struct DegreeReport {
  long r = 0;
  long degree = -1;
  IntegerPolynomial poly;
};

/// Samples f_r at M_lo .. M_lo + count - 1, reads the degree off the exact
/// forward differences and interpolates. Degree-mismatch error if the
/// differences do not vanish, the interpolant is not integral, or the degree
/// is not r - 1 (r even) / r (r odd).
DegreeReport detect_degree(long r, long M_lo, long count);

/// max |coeff| <= (2r)! · C.
bool coefficient_bound_check(long r, const IntegerPolynomial& poly, long C = 100);
mpz_class factorial(long n);

/// max(0, 1 - 2n/(k(k+1))).
mpq_class pigeonhole_c(long n, long k);

struct LemmaSum {
  long ell_max = 0;               // largest ℓ >= 0 with ℓ² < xT
  std::optional<mpq_class> exact; // present for even k
  Real value;
};

/// Σ_{ℓ² < xT} (-1)^ℓ (x - ℓ²/T)^{k/2}; exact for even k.
LemmaSum lemma_sum(const mpq_class& x, const mpq_class& T, long k, const PrecisionContext& ctx);

/// √(xT) (e^{(k/2) log x - πu√x} + ((u⁴ + 4u²T) x²)^{1/4} / √T).
Real lemma_rhs(const mpq_class& x, const mpq_class& T, long k, const mpq_class& u, Bits bits);

}  // namespace osc
