#include <string>

#include "osc/error.hpp"
#include "osc/numerics.hpp"

namespace osc {

namespace {

void check_order(int alpha) {
  if (alpha != 0 && alpha != 1) {
    fail(ErrorKind::invalid_parameters, "bessel_i supports orders 0 and 1, got " + std::to_string(alpha));
  }
}

}  // namespace

// Ascending series sum_{m>=0} (z/2)^{2m+alpha} / (m! (m+alpha)!). All terms are
// positive for real z >= 0, so truncating once a term drops below
// 2^-(bits+guard) of the partial sum (past the peak term) is rigorous up to a
// geometric tail factor.
Real bessel_i(int alpha, const Real& z, const PrecisionContext& ctx) {
  check_order(alpha);
  if (z.sign() < 0) fail(ErrorKind::domain, "bessel_i needs z >= 0");
  const Bits bits = ctx.working_bits() + 16;
  const Real half = z.with_precision(bits) / 2L;
  const Real quarter_sq = square(half);

  Real term = alpha == 0 ? Real(1L, bits) : half;
  if (term.is_zero()) return Real(ctx.working_bits());
  Real sum = term;
  const double peak = half.to_double();
  for (long m = 0;; ++m) {
    term *= quarter_sq;
    term /= (m + 1) * (m + 1 + alpha);
    sum += term;
    if (static_cast<double>(m) > peak) {
      Real threshold = sum;
      mpfr_mul_2si(threshold.get(), threshold.get(), -static_cast<long>(bits), MPFR_RNDN);
      if (term < threshold) break;
    }
  }
  if (!sum.is_finite()) fail(ErrorKind::overflow, "bessel_i overflows");
  return sum.with_precision(ctx.working_bits());
}

Complex bessel_i(int alpha, const Complex& z, const PrecisionContext& ctx) {
  check_order(alpha);
  const Bits bits = ctx.working_bits() + 16;
  const Complex half(z.re.with_precision(bits) / 2L, z.im.with_precision(bits) / 2L);
  const Complex quarter_sq = half * half;

  Complex term = alpha == 0 ? Complex(Real(1L, bits)) : half;
  Complex sum = term;
  const double peak = abs(half).to_double();
  Real largest = abs(term);
  for (long m = 0;; ++m) {
    term = term * quarter_sq;
    const long denom = (m + 1) * (m + 1 + alpha);
    term.re /= denom;
    term.im /= denom;
    sum += term;
    const Real magnitude = abs(term);
    if (largest < magnitude) largest = magnitude;
    if (static_cast<double>(m) > peak) {
      // Relative to the largest term: cancellation already cost what it cost.
      Real threshold = max(abs(sum), largest);
      mpfr_mul_2si(threshold.get(), threshold.get(), -static_cast<long>(bits), MPFR_RNDN);
      if (magnitude < threshold) break;
    }
  }
  if (!sum.is_finite()) fail(ErrorKind::overflow, "bessel_i overflows");
  return Complex(sum.re.with_precision(ctx.working_bits()), sum.im.with_precision(ctx.working_bits()));
}

}  // namespace osc
