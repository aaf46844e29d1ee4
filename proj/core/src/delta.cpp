#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "osc/error.hpp"
#include "osc/oscsum.hpp"

namespace osc {

namespace {

void check_params(double a, double c) {
  if (!(a > 0) || !(c > 0)) fail(ErrorKind::invalid_parameters, "delta needs a > 0 and c > 0");
}

constexpr double kInvPhi = 0.6180339887498949;

}  // namespace

double delta(double r, double a, double c) {
  check_params(a, c);
  if (r < 0) fail(ErrorKind::domain, "delta needs r >= 0");
  const double u = std::sqrt(a) * r;
  return std::sqrt(u * (std::sqrt(u * u + 4) + u) / 2) - std::numbers::pi * r / c;
}

double delta_derivative(double r, double a, double c) {
  check_params(a, c);
  if (r < 0) fail(ErrorKind::domain, "delta needs r >= 0");
  if (r == 0) return HUGE_VAL;
  const double ra = std::sqrt(a);
  const double u = ra * r;
  const double s = std::sqrt(u * u + 4);
  const double f = u * (s + u) / 2;
  const double df = ra * (s + 2 * u + u * u / s) / 2;
  return df / (2 * std::sqrt(f)) - std::numbers::pi / c;
}

double delta_search_limit(double a, double c) {
  check_params(a, c);
  return 4 * c / std::numbers::pi * (1 + 1 / std::sqrt(a)) + 4;
}

DeltaMaximum maximize_delta(double a, double c) {
  const double limit = delta_search_limit(a, c);
  DeltaMaximum result;
  if (delta_derivative(limit, a, c) >= 0) {
    // Δ is concave, so still rising here means it never turns over.
    result.alpha_star = limit;
    result.delta_max = delta(limit, a, c);
    result.w = 1;
    result.unbounded = true;
    return result;
  }

  double lo = 0;
  double hi = limit;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = delta(x1, a, c);
  double f2 = delta(x2, a, c);
  while (hi - lo > 1e-6 * limit) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = delta(x2, a, c);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = delta(x1, a, c);
    }
  }

  // Polish on Δ' = 0.
  if (delta_derivative(lo, a, c) <= 0) lo = 0;
  if (delta_derivative(hi, a, c) >= 0) hi = limit;
  double mid = (lo + hi) / 2;
  for (int iter = 0; iter < 200; ++iter) {
    mid = (lo + hi) / 2;
    const double slope = delta_derivative(mid, a, c);
    if (std::abs(slope) <= 1e-12 || hi - lo <= 4 * std::numeric_limits<double>::epsilon() * hi) break;
    if (slope > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  const double best = delta(mid, a, c);
  if (best <= 0) return result;
  result.alpha_star = mid;
  result.delta_max = best;
  result.w = std::min(1.0, best);
  return result;
}

Real bound_main1(const mpq_class& a, const Constant& c, const mpq_class& x, const PrecisionContext& ctx) {
  if (x <= 0) fail(ErrorKind::domain, "bound needs x > 0");
  const DeltaMaximum best = maximize_delta(a.get_d(), c.to_double());
  const Bits bits = ctx.working_bits();
  const Real root_x = sqrt(Real(x, bits));
  if (best.w == 0) return root_x;
  return root_x * exp(Real(best.w, bits) * c.evaluate(bits) * root_x);
}

}  // namespace osc
