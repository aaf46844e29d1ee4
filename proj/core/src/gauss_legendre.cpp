#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

#include "osc/contour.hpp"
#include "osc/error.hpp"

namespace osc {

namespace {

GaussLegendreRule build_rule(int n, Bits bits) {
  const Bits wbits = bits + 32;
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n), Real(bits));
  rule.weights.resize(static_cast<std::size_t>(n), Real(bits));
  const Real one(1L, wbits);
  const Real eps = Real(1L, wbits) / pow(Real(2L, wbits), static_cast<long>(bits + 16));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real x(std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5)), wbits);
    Real derivative(wbits);
    for (int iter = 0; iter < 100; ++iter) {
      Real p_prev(1L, wbits);
      Real p = x;
      for (int k = 1; k < n; ++k) {
        Real p_next = (x * p * (2L * k + 1) - p_prev * static_cast<long>(k)) / static_cast<long>(k + 1);
        p_prev = std::move(p);
        p = std::move(p_next);
      }
      derivative = (x * p - p_prev) * static_cast<long>(n) / (square(x) - one);
      const Real step = p / derivative;
      x -= step;
      if (abs(step) <= eps) break;
      if (iter == 99) fail(ErrorKind::non_convergence, "Gauss-Legendre node iteration did not converge");
    }
    const Real w = Real(2L, wbits) / ((one - square(x)) * square(derivative));
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = (-x).with_precision(bits);
    rule.nodes[hi] = x.with_precision(bits);
    rule.weights[lo] = w.with_precision(bits);
    rule.weights[hi] = w.with_precision(bits);
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = Real(0L, bits);
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int points, Bits bits) {
  if (points < 1) fail(ErrorKind::invalid_parameters, "Gauss-Legendre rule needs at least one point");
  static std::mutex mutex;
  static std::map<std::pair<int, Bits>, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{points, bits}];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(build_rule(points, bits));
  return *slot;
}

}  // namespace osc
