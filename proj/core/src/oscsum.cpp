#include "osc/oscsum.hpp"

#include <cmath>
#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

#include "osc/error.hpp"

namespace osc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

long to_long(const mpz_class& z) {
  if (!z.fits_slong_p()) fail(ErrorKind::out_of_range, "index " + z.get_str() + " does not fit in a long");
  return z.get_si();
}

long integral_argument(const mpq_class& t, const char* what) {
  if (t.get_den() != 1) {
    fail(ErrorKind::invalid_parameters, std::string(what) + " needs integer arguments, got " + to_string(t));
  }
  return to_long(t.get_num());
}

constexpr Bits kRootBits = 256;

}  // namespace

QuadraticForm::QuadraticForm(mpq_class a_, mpq_class b_, mpq_class d_)
    : a(std::move(a_)), b(std::move(b_)), d(std::move(d_)) {
  a.canonicalize();
  b.canonicalize();
  d.canonicalize();
  if (a <= 0) fail(ErrorKind::invalid_parameters, "quadratic form needs a > 0");
}

QuadraticForm::Range QuadraticForm::index_range(const mpq_class& x) const {
  const mpq_class disc = b * b - 4 * a * (d - x);
  if (disc <= 0) return {};
  const Real root = sqrt(Real(disc, kRootBits));
  const Real two_a(mpq_class(2 * a), kRootBits);
  const Real minus_b(mpq_class(-b), kRootBits);
  long lo = to_long(floor_to_integer((minus_b - root) / two_a)) + 1;
  long hi = to_long(floor_to_integer((minus_b + root) / two_a));
  // Rounding can land one step off in either direction.
  while ((*this)(lo - 1) < x) --lo;
  while (lo <= hi && (*this)(lo) >= x) ++lo;
  while ((*this)(hi + 1) < x) ++hi;
  while (hi >= lo && (*this)(hi) >= x) --hi;
  return {lo, hi};
}

Real Weight::operator()(long n, Bits bits) const {
  if (trivial()) return Real(1L, bits);
  const mpq_class base = alpha * n + beta;
  if (t.get_den() == 1 && t.get_num().fits_slong_p()) {
    if (base == 0 && t < 0) fail(ErrorKind::domain, "weight has a pole at n = " + std::to_string(n));
    return pow(Real(base, bits), t.get_num().get_si());
  }
  if (base < 0) fail(ErrorKind::domain, "weight base negative at n = " + std::to_string(n));
  return pow(Real(base, bits), Real(t, bits));
}

void KernelSpec::validate() const {
  std::visit(overloaded{
                 [](const kernel::ExpSqrt& k) {
                   if (k.c.sign() <= 0) fail(ErrorKind::invalid_parameters, "exp_sqrt needs c > 0");
                 },
                 [](const kernel::Rademacher&) {},
                 [](const kernel::Bessel& k) {
                   if (k.alpha != 0 && k.alpha != 1) fail(ErrorKind::invalid_parameters, "bessel order must be 0 or 1");
                   if (k.c.sign() <= 0) fail(ErrorKind::invalid_parameters, "bessel needs c > 0");
                 },
                 [](const kernel::Meinardus& k) { k.params.validate(); },
                 [](const kernel::Power&) {},
                 [](const kernel::ComplexExp& k) {
                   const double alpha = k.alpha.to_double();
                   if (alpha < 0 || alpha > 2) fail(ErrorKind::invalid_parameters, "complex_exp needs 0 <= alpha <= 2");
                 },
                 [](const kernel::DistinctParts&) {},
                 [](const kernel::Mod5& k) {
                   if (k.a < 1 || k.a > 4) fail(ErrorKind::invalid_parameters, "mod5 residue must be in 1..4");
                 },
             },
             family);
}

double KernelSpec::growth() const {
  const double partition_rate = std::numbers::pi * std::sqrt(2.0 / 3.0);
  return std::visit(overloaded{
                        [](const kernel::ExpSqrt& k) { return k.c.to_double(); },
                        [&](const kernel::Rademacher& k) {
                          switch (k.term) {
                            case kernel::RademacherTerm::p3:
                            case kernel::RademacherTerm::sqrt_p1:
                              return partition_rate / 2;
                            default:
                              return partition_rate;
                          }
                        },
                        [](const kernel::Bessel& k) { return k.c.to_double(); },
                        [](const kernel::Meinardus&) { return 0.0; },
                        [](const kernel::Power&) { return 0.0; },
                        [](const kernel::ComplexExp& k) { return k.alpha.to_double(); },
                        [](const kernel::DistinctParts&) { return std::numbers::pi / std::sqrt(3.0); },
                        [](const kernel::Mod5&) { return 2 * std::numbers::pi / std::sqrt(15.0); },
                    },
                    family);
}

std::string KernelSpec::name() const {
  return std::visit(overloaded{
                        [](const kernel::ExpSqrt& k) { return "exp_sqrt(" + k.c.to_string() + ")"; },
                        [](const kernel::Rademacher& k) -> std::string {
                          switch (k.term) {
                            case kernel::RademacherTerm::p1: return "p1";
                            case kernel::RademacherTerm::p2: return "p2";
                            case kernel::RademacherTerm::p3: return "p3";
                            case kernel::RademacherTerm::p4: return "p4";
                            case kernel::RademacherTerm::sqrt_p1: return "sqrt_p1";
                          }
                          return "rademacher";
                        },
                        [](const kernel::Bessel& k) {
                          return "bessel(" + std::to_string(k.alpha) + "," + k.c.to_string() + ")";
                        },
                        [](const kernel::Meinardus&) { return std::string("meinardus"); },
                        [](const kernel::Power& k) { return "power(" + to_string(k.exponent) + ")"; },
                        [](const kernel::ComplexExp& k) {
                          return "complex_exp(" + k.alpha.to_string() + "," + k.beta.to_string() + ")";
                        },
                        [](const kernel::DistinctParts&) { return std::string("distinct"); },
                        [](const kernel::Mod5& k) { return "mod5(" + std::to_string(k.a) + ")"; },
                    },
                    family);
}

Complex KernelSpec::evaluate(const mpq_class& t, long n, const PrecisionContext& ctx) const {
  const Bits bits = ctx.working_bits();
  const Real arg(t, bits);
  Complex value = std::visit(
      overloaded{
          [&](const kernel::ExpSqrt& k) { return Complex(exp(k.c.evaluate(bits) * sqrt(arg))); },
          [&](const kernel::Rademacher& k) {
            switch (k.term) {
              case kernel::RademacherTerm::p1: return Complex(p1(arg, ctx));
              case kernel::RademacherTerm::p2: return Complex(p2(arg, ctx));
              case kernel::RademacherTerm::p3: return Complex(p3(integral_argument(t, "p3"), ctx));
              case kernel::RademacherTerm::p4: return Complex(p4(integral_argument(t, "p4"), ctx));
              case kernel::RademacherTerm::sqrt_p1: return Complex(sqrt(p1(arg, ctx)));
            }
            fail(ErrorKind::invalid_parameters, "unknown Rademacher term");
          },
          [&](const kernel::Bessel& k) { return Complex(bessel_i(k.alpha, k.c.evaluate(bits) * sqrt(arg), ctx)); },
          [&](const kernel::Meinardus& k) { return Complex(meinardus_kernel(k.params, arg, ctx)); },
          [&](const kernel::Power& k) {
            if (k.exponent == 0) return Complex(Real(1L, bits));
            return Complex(pow(arg, Real(k.exponent, bits)));
          },
          [&](const kernel::ComplexExp& k) {
            const Real s = sqrt(arg);
            const Real phase = k.beta.evaluate(bits) * s;
            const Real modulus = exp(k.alpha.evaluate(bits) * s);
            return Complex(modulus * cos(phase), modulus * sin(phase));
          },
          [&](const kernel::DistinctParts&) { return Complex(q1_kernel(arg, ctx)); },
          [&](const kernel::Mod5& k) { return Complex(p5_kernel(arg, k.a, ctx, k.constants)); },
      },
      family);
  if (weight.trivial()) return value;
  return value * weight(n, bits);
}

void SumReport::set_bound(Real bound) {
  if (bound.sign() > 0) {
    ratio = abs_value / bound;
  } else {
    ratio.reset();
  }
  predicted_bound = std::move(bound);
}

namespace {

struct Accumulated {
  Complex value;
  bool cancellation_ok = true;
  Bits extra_bits = 0;
};

Accumulated accumulate(const KernelSpec& kernel, const QuadraticForm& q, const mpq_class& x,
                       const QuadraticForm::Range& range, const PrecisionContext& ctx, SumOrder order,
                       Bits target_bits) {
  const Bits bits = ctx.working_bits();
  Complex acc(bits);
  double max_log = -std::numeric_limits<double>::infinity();
  auto add = [&](long n) {
    const Complex term = kernel.evaluate(x - q(n), n, ctx);
    max_log = std::max(max_log, abs(term).log_abs());
    if (n % 2 == 0) {
      acc += term;
    } else {
      acc -= term;
    }
  };
  if (order == SumOrder::ascending) {
    for (long n = range.lo; n <= range.hi; ++n) add(n);
  } else {
    const long reach = std::max(std::abs(range.lo), std::abs(range.hi));
    for (long k = 0; k <= reach; ++k) {
      if (k >= range.lo && k <= range.hi) add(k);
      if (k != 0 && -k >= range.lo && -k <= range.hi) add(-k);
    }
  }
  if (!acc.is_finite()) fail(ErrorKind::overflow, "alternating sum overflowed");

  Accumulated out{std::move(acc)};
  const double result_log = abs(out.value).log_abs();
  if (!std::isfinite(max_log) || !std::isfinite(result_log)) return out;
  const auto lost_bits = static_cast<Bits>(std::ceil((max_log - result_log) / std::numbers::ln2)) + 8;
  if (ctx.working_bits() - lost_bits < target_bits) {
    out.cancellation_ok = false;
    out.extra_bits = target_bits + lost_bits - ctx.working_bits();
  }
  return out;
}

}  // namespace

SumReport alternating_sum(const KernelSpec& kernel, const QuadraticForm& q, const mpq_class& x,
                          const PrecisionContext& ctx, const SumOptions& options) {
  kernel.validate();
  const QuadraticForm::Range range = q.index_range(x);
  if (range.empty()) fail(ErrorKind::empty_range, "no integer n with q(n) < " + to_string(x));
  if (options.check_precision) {
    const double span = mpq_class(x - q.minimum()).get_d();
    const Bits needed = required_bits(span, kernel.growth());
    if (needed > ctx.bits) {
      fail(ErrorKind::precision_insufficient,
           "sum at x = " + to_string(x) + " needs " + std::to_string(needed) + " bits, context has " +
               std::to_string(ctx.bits));
    }
  }

  // Cancellation can eat more than the guard bits; redo the pass with the
  // measured loss added until the result holds ctx.bits relative bits.
  PrecisionContext pass = ctx;
  Accumulated acc = accumulate(kernel, q, x, range, pass, options.order, ctx.bits + 8);
  for (int attempt = 0; attempt < 6 && !acc.cancellation_ok; ++attempt) {
    pass = PrecisionContext(pass.bits + acc.extra_bits, ctx.guard_bits);
    acc = accumulate(kernel, q, x, range, pass, options.order, ctx.bits + 8);
  }
  Complex value(acc.value.re.with_precision(ctx.working_bits()), acc.value.im.with_precision(ctx.working_bits()));

  SumReport report;
  report.x = x;
  report.abs_value = abs(value);
  report.value = std::move(value);
  report.term_count = range.count();
  report.precision_bits = ctx.bits;
  if (options.bound) {
    report.set_bound(*options.bound);
  } else if (const auto* k = std::get_if<kernel::ExpSqrt>(&kernel.family)) {
    report.set_bound(bound_main1(q.a, k->c, x, ctx));
  }
  return report;
}

SumReport complex_alternating_sum(const Constant& alpha, const Constant& beta, const mpq_class& T,
                                  const mpq_class& x, const PrecisionContext& ctx, double delta_slack) {
  if (T <= 0) fail(ErrorKind::invalid_parameters, "T must be positive");
  if (T * x < 1) fail(ErrorKind::invalid_parameters, "need T x >= 1");
  const Real beta_value = beta.evaluate(ctx.working_bits());
  if (square(beta_value) > Real(T, ctx.working_bits())) fail(ErrorKind::invalid_parameters, "need |beta| <= sqrt(T)");
  const KernelSpec spec(kernel::ComplexExp{alpha, beta});
  const QuadraticForm q(1 / T, 0, 0);
  const Bits bits = ctx.working_bits();
  SumOptions options;
  options.bound = bound_main2(alpha.evaluate(bits), beta_value, Real(T, bits), Real(x, bits), delta_slack);
  return alternating_sum(spec, q, x, ctx, options);
}

Real main2_exponent(Bits bits) {
  const Real pi = Real::pi(bits);
  return sqrt(Real(2L, bits) / (square(pi) + 2L));
}

Real bound_main2(const Real& alpha, const Real& beta, const Real& T, const Real& x, double delta_slack) {
  const Bits bits = std::max({alpha.precision(), beta.precision(), T.precision(), x.precision()});
  const Real rate = alpha * (main2_exponent(bits) + Real(delta_slack, bits));
  const Real front = sqrt(T / (abs(beta) + 1L));
  return front * exp(rate * sqrt(x)) + sqrt(T);
}

ExponentSample ExponentSample::from_abs(double x, const Real& abs_value) {
  if (abs_value.sign() <= 0) fail(ErrorKind::domain, "exponent fit needs |S| > 0");
  return {x, abs_value.log_abs()};
}

ExponentFit empirical_exponent(const std::vector<ExponentSample>& samples) {
  if (samples.size() < 3) fail(ErrorKind::invalid_parameters, "exponent fit needs at least 3 samples");
  double mean_s = 0;
  double mean_y = 0;
  for (const ExponentSample& s : samples) {
    if (s.x < 0) fail(ErrorKind::domain, "exponent fit needs x >= 0");
    if (!std::isfinite(s.log_abs)) fail(ErrorKind::domain, "exponent fit needs |S| > 0");
    mean_s += std::sqrt(s.x);
    mean_y += s.log_abs;
  }
  const double count = static_cast<double>(samples.size());
  mean_s /= count;
  mean_y /= count;
  double sxx = 0;
  double sxy = 0;
  for (const ExponentSample& s : samples) {
    const double ds = std::sqrt(s.x) - mean_s;
    sxx += ds * ds;
    sxy += ds * (s.log_abs - mean_y);
  }
  if (sxx <= std::numeric_limits<double>::epsilon() * mean_s * mean_s * count) {
    fail(ErrorKind::degenerate_fit, "all sample abscissae coincide");
  }
  ExponentFit fit;
  fit.w_hat = sxy / sxx;
  fit.intercept = mean_y - fit.w_hat * mean_s;
  double sq = 0;
  for (const ExponentSample& s : samples) {
    const double e = s.log_abs - (fit.w_hat * std::sqrt(s.x) + fit.intercept);
    sq += e * e;
  }
  fit.residual = std::sqrt(sq / count);
  return fit;
}

}  // namespace osc
