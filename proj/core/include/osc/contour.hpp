#pragma once

// Residue-theorem check for the alternating sums: the integral of
//   H(z) = K(x - q(z)) h(z) / sin(πz)
// around a rectangle enclosing exactly the integer poles with q(n) < x equals
// 2πi Σ Res = 2i Σ (-1)^n K(x - q(n)) h(n), each residue carrying 1/π.

#include <gmpxx.h>

#include <array>
#include <vector>

#include "osc/numerics.hpp"
#include "osc/oscsum.hpp"

namespace osc {

/// Gauss-Legendre nodes and weights on [-1, 1] at the given precision
/// (cached per precision).
struct GaussLegendreRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};

const GaussLegendreRule& gauss_legendre(int points, Bits bits);

struct RectContour {
  Real left;    // abscissa of the left vertical leg
  Real right;   // abscissa of the right vertical leg
  Real height;  // horizontal legs at Im z = ±height
  /// Distance the right/left legs were moved off the half-integer to stay
  /// inside the branch points (0 when no move was needed).
  double shift = 0;

  /// Vertical legs at the half-integers just outside the enclosed poles (or
  /// halfway to the branch point when that is closer), height u√x.
  static RectContour around(const QuadraticForm& q, const mpq_class& x, const mpq_class& u, Bits bits);
};

/// K(x - q(z)) h(z) / sin(πz) for kernels with an analytic continuation
/// (exp_sqrt, complex_exp, bessel, power); others raise invalid_parameters.
struct ContourIntegrand {
  KernelSpec kernel;
  QuadraticForm q;
  mpq_class x;

  Complex operator()(const Complex& z, const PrecisionContext& ctx) const;
  /// Everything but the 1/sin(πz) factor.
  Complex numerator(const Complex& z, const PrecisionContext& ctx) const;
};

enum class Orientation { counterclockwise, clockwise };

struct QuadratureOptions {
  double tol = 1e-18;
  int max_depth = 20;
  double min_sin = 1e-3;
  Orientation orientation = Orientation::counterclockwise;
};

struct RectangleIntegral {
  Complex value;
  /// |∫| over bottom, right, top, left legs.
  std::array<Real, 4> leg_mags;
  std::array<Complex, 4> legs;
  long evaluations = 0;
};

/// Adaptive composite 32-point Gauss-Legendre per leg.
RectangleIntegral integrate_rectangle(const ContourIntegrand& H, const RectContour& contour,
                                      const PrecisionContext& ctx, const QuadratureOptions& options = {});

struct ResidueCheck {
  RectContour contour;
  Complex quad;
  Complex discrete;
  Real rel_err;
  std::array<Real, 4> leg_mags;
  SumReport sum;
};

/// quad vs 2πi Σ Res = 2i · alternating_sum(kernel, q, x).
ResidueCheck residue_identity_check(const KernelSpec& kernel, const QuadraticForm& q, const mpq_class& x,
                                    const mpq_class& u, const PrecisionContext& ctx,
                                    const QuadratureOptions& options = {});

}  // namespace osc
