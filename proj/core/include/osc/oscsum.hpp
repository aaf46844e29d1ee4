#pragma once

// Alternating sums Σ_{q(n)<x} (-1)^n K(x - q(n)) h(n) over a quadratic index
// constraint, the Δ-based cancellation bound, the complex-exponent variant and
// a log-linear exponent fit.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "osc/constant.hpp"
#include "osc/numerics.hpp"
#include "osc/partition.hpp"

namespace osc {

/// q(n) = a n² + b n + d with exact rational coefficients, a > 0.
struct QuadraticForm {
  mpq_class a{1};
  mpq_class b{0};
  mpq_class d{0};

  QuadraticForm() = default;
  QuadraticForm(mpq_class a_, mpq_class b_, mpq_class d_);

  /// n², the lattice of the ℓ-sums.
  static QuadraticForm squares() { return {1, 0, 0}; }
  /// G_n = (3n² - n)/2.
  static QuadraticForm pentagonal() { return {mpq_class(3, 2), mpq_class(-1, 2), 0}; }

  mpq_class operator()(long n) const { return (a * n + b) * n + d; }
  /// Value at the vertex -b/(2a).
  mpq_class minimum() const { return d - b * b / (4 * a); }

  struct Range {
    long lo = 0;
    long hi = -1;
    bool empty() const { return hi < lo; }
    long count() const { return empty() ? 0 : hi - lo + 1; }
  };

  /// All integers n with q(n) < x (strict), decided exactly.
  Range index_range(const mpq_class& x) const;
};

namespace kernel {

/// e^{c√t}.
struct ExpSqrt {
  Constant c{1};
};

enum class RademacherTerm { p1, p2, p3, p4, sqrt_p1 };

struct Rademacher {
  RademacherTerm term = RademacherTerm::p2;
};

/// I_α(c√t).
struct Bessel {
  int alpha = 0;
  Constant c{1};
};

struct Meinardus {
  MeinardusParams params = MeinardusParams::usual_partitions();
};

/// t^exponent (exponent = k/2 in the lemma sums).
struct Power {
  mpq_class exponent{0};
};

/// e^{(α + iβ)√t}.
struct ComplexExp {
  Constant alpha{1};
  Constant beta{0};
};

/// q1_kernel(t): distinct-part partitions.
struct DistinctParts {};

/// p5_kernel(t, a).
struct Mod5 {
  int a = 1;
  Mod5Constants constants;
};

}  // namespace kernel

using KernelFamily = std::variant<kernel::ExpSqrt, kernel::Rademacher, kernel::Bessel, kernel::Meinardus,
                                  kernel::Power, kernel::ComplexExp, kernel::DistinctParts, kernel::Mod5>;

/// h(n) = (alpha n + beta)^t; the default is h = 1.
struct Weight {
  mpq_class alpha{0};
  mpq_class beta{1};
  mpq_class t{0};

  bool trivial() const { return t == 0; }
  Real operator()(long n, Bits bits) const;
};

struct KernelSpec {
  KernelFamily family = kernel::ExpSqrt{};
  Weight weight;

  KernelSpec() = default;
  KernelSpec(KernelFamily family_, Weight weight_ = {}) : family(std::move(family_)), weight(std::move(weight_)) {}  // NOLINT

  /// Rejects c <= 0 for exp_sqrt, alpha outside [0, 2] for complex_exp, etc.
  void validate() const;
  /// Exponential growth rate c in K(t) ≈ e^{c√t}; 0 for power kernels.
  double growth() const;
  bool is_complex() const { return std::holds_alternative<kernel::ComplexExp>(family); }
  std::string name() const;

  /// K(t)·h(n) without the sign.
  Complex evaluate(const mpq_class& t, long n, const PrecisionContext& ctx) const;
};

struct SumReport {
  mpq_class x;
  Complex value;
  Real abs_value;
  long term_count = 0;
  std::optional<Real> predicted_bound;
  std::optional<Real> ratio;  // abs_value / predicted_bound, only when bound > 0
  Bits precision_bits = 0;

  void set_bound(Real bound);
};

enum class SumOrder { by_abs_index, ascending };

struct SumOptions {
  SumOrder order = SumOrder::by_abs_index;
  /// Skip the required_bits check (tests that probe low precision).
  bool check_precision = true;
  /// Explicit predicted bound; otherwise bound_main1 for exp_sqrt kernels.
  std::optional<Real> bound;
};

/// Σ_{q(n)<x} (-1)^n K(x - q(n)) h(n).
SumReport alternating_sum(const KernelSpec& kernel, const QuadraticForm& q, const mpq_class& x,
                          const PrecisionContext& ctx, const SumOptions& options = {});

/// Δ(r) = √(√a r (√(ar²+4) + r√a) / 2) - πr/c.
double delta(double r, double a, double c);
double delta_derivative(double r, double a, double c);

struct DeltaMaximum {
  double alpha_star = 0;
  double w = 0;
  double delta_max = 0;
  /// Δ still increasing at the end of the search window (Δ unbounded, w = 1).
  bool unbounded = false;
};

/// Search window 4c/π (1 + 1/√a) + 4.
double delta_search_limit(double a, double c);
DeltaMaximum maximize_delta(double a, double c);

/// √x e^{w c √x} with w from maximize_delta(a, c).
Real bound_main1(const mpq_class& a, const Constant& c, const mpq_class& x, const PrecisionContext& ctx);

/// Σ_{ℓ² < Tx} (-1)^ℓ e^{(α + iβ)√(x - ℓ²/T)}.
SumReport complex_alternating_sum(const Constant& alpha, const Constant& beta, const mpq_class& T,
                                  const mpq_class& x, const PrecisionContext& ctx, double delta_slack = 0.05);

/// √(2/(2+π²)).
Real main2_exponent(Bits bits);

/// √(T/(|β|+1)) e^{α(√(2/(2+π²)) + δ)√x} + √T.
Real bound_main2(const Real& alpha, const Real& beta, const Real& T, const Real& x, double delta_slack);

struct ExponentSample {
  double x = 0;
  double log_abs = 0;

  static ExponentSample from_abs(double x, const Real& abs_value);
};

struct ExponentFit {
  double w_hat = 0;
  double intercept = 0;
  double residual = 0;  // RMS
};

/// Least squares of log|S| = w_hat √x + intercept.
ExponentFit empirical_exponent(const std::vector<ExponentSample>& samples);

}  // namespace osc
