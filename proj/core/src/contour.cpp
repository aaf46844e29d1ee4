#include "osc/contour.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <string>
#include <variant>

#include "osc/error.hpp"

namespace osc {

namespace {

constexpr int kRulePoints = 32;

Complex quadratic_at(const QuadraticForm& q, const Complex& z, Bits bits) {
  const Real a(q.a, bits);
  const Real b(q.b, bits);
  const Real d(q.d, bits);
  Complex linear = z * a;
  linear.re += b;
  Complex value = linear * z;
  value.re += d;
  return value;
}

Complex weight_at(const Weight& weight, const Complex& z, Bits bits) {
  Complex base = z * Real(weight.alpha, bits);
  base.re += Real(weight.beta, bits);
  if (weight.t.get_den() == 1 && weight.t.get_num().fits_slong_p()) return pow(base, weight.t.get_num().get_si());
  return pow(base, Real(weight.t, bits));
}

}  // namespace

RectContour RectContour::around(const QuadraticForm& q, const mpq_class& x, const mpq_class& u, Bits bits) {
  if (u <= 0) fail(ErrorKind::invalid_parameters, "contour height factor u must be positive");
  const QuadraticForm::Range range = q.index_range(x);
  if (range.empty()) fail(ErrorKind::empty_range, "no poles inside the contour for x = " + to_string(x));

  const mpq_class disc = q.b * q.b - 4 * q.a * (q.d - x);
  const Real root = sqrt(Real(disc, bits));
  const Real two_a(mpq_class(2 * q.a), bits);
  const Real minus_b(mpq_class(-q.b), bits);
  const Real branch_lo = (minus_b - root) / two_a;
  const Real branch_hi = (minus_b + root) / two_a;

  RectContour contour;
  const Real half(0.5, bits);
  const Real hi_half = Real(range.hi, bits) + half;
  const Real lo_half = Real(range.lo, bits) - half;
  contour.right = hi_half < branch_hi ? hi_half : (Real(range.hi, bits) + branch_hi) / 2L;
  contour.left = lo_half > branch_lo ? lo_half : (Real(range.lo, bits) + branch_lo) / 2L;
  contour.shift = std::max((hi_half - contour.right).to_double(), (contour.left - lo_half).to_double());
  contour.height = Real(u, bits) * sqrt(Real(x, bits));
  return contour;
}

Complex ContourIntegrand::numerator(const Complex& z, const PrecisionContext& ctx) const {
  const Bits bits = ctx.working_bits();
  Complex w = quadratic_at(q, z, bits);
  w = Complex(Real(x, bits) - w.re, -w.im);
  if (w.re.sign() <= 0) {
    const Real tiny = abs(w) / pow(Real(2L, bits), static_cast<long>(bits / 2));
    if (abs(w.im) <= tiny) fail(ErrorKind::domain, "contour touches the branch cut of sqrt(x - q(z))");
  }
  const Complex s = complex_sqrt_principal(w);

  Complex value = std::visit(
      [&](const auto& k) -> Complex {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, kernel::ExpSqrt>) {
          return exp(s * k.c.evaluate(bits));
        } else if constexpr (std::is_same_v<K, kernel::ComplexExp>) {
          return exp(s * Complex(k.alpha.evaluate(bits), k.beta.evaluate(bits)));
        } else if constexpr (std::is_same_v<K, kernel::Bessel>) {
          return bessel_i(k.alpha, s * k.c.evaluate(bits), ctx);
        } else if constexpr (std::is_same_v<K, kernel::Power>) {
          if (k.exponent == 0) return Complex(Real(1L, bits));
          const mpq_class twice = 2 * k.exponent;
          if (twice.get_den() == 1 && twice.get_num().fits_slong_p()) return pow(s, twice.get_num().get_si());
          return pow(w, Real(k.exponent, bits));
        } else {
          fail(ErrorKind::invalid_parameters, "kernel has no analytic continuation for contour checks");
        }
      },
      kernel.family);
  if (!kernel.weight.trivial()) value = value * weight_at(kernel.weight, z, bits);
  return value;
}

Complex ContourIntegrand::operator()(const Complex& z, const PrecisionContext& ctx) const {
  return numerator(z, ctx) / sin_pi(z);
}

namespace {

bool crosses_cut_safely(const ContourIntegrand& H) {
  if (const auto* p = std::get_if<kernel::Power>(&H.kernel.family)) return p->exponent.get_den() == 1;
  return false;
}

/// Raises a domain error when the segment a→b meets the cut of √(x - q(z)).
/// Im(x - q(z)) is a quadratic in the segment parameter, so the crossings are
/// found directly instead of hoping a node lands on them.
void check_branch_cut(const ContourIntegrand& H, const Complex& a, const Complex& b, Bits bits) {
  const Complex d = b - a;
  const double qa = H.q.a.get_d();
  const double qb = H.q.b.get_d();
  const double a_re = a.re.to_double(), a_im = a.im.to_double();
  const double d_re = d.re.to_double(), d_im = d.im.to_double();
  const double c0 = qa * 2 * a_re * a_im + qb * a_im;
  const double c1 = 2 * qa * (a_re * d_im + a_im * d_re) + qb * d_im;
  const double c2 = qa * 2 * d_re * d_im;
  std::vector<double> ts;
  if (std::abs(c2) > 1e-300) {
    const double disc = c1 * c1 - 4 * c2 * c0;
    if (disc >= 0) {
      const double root = std::sqrt(disc);
      ts.push_back((-c1 - root) / (2 * c2));
      ts.push_back((-c1 + root) / (2 * c2));
    }
  } else if (std::abs(c1) > 1e-300) {
    ts.push_back(-c0 / c1);
  } else if (std::abs(c0) <= 1e-300) {
    ts = {0.0, 0.5, 1.0};
  }
  for (double t : ts) {
    if (t < 0 || t > 1) continue;
    const Complex z = a + d * Real(t, bits);
    const Complex qz = quadratic_at(H.q, z, bits);
    if (Real(H.x, bits) - qz.re <= Real(0L, bits)) {
      fail(ErrorKind::domain, "contour crosses the branch cut of sqrt(x - q(z)) near z = " + z.re.to_string(10) +
                                  " + " + z.im.to_string(10) + "i");
    }
  }
}

class LegIntegrator {
 public:
  LegIntegrator(const ContourIntegrand& H, const PrecisionContext& ctx, const QuadratureOptions& options)
      : H_(H), ctx_(ctx), options_(options), rule_(gauss_legendre(kRulePoints, ctx.working_bits())) {}

  Complex eval(const Complex& z) {
    ++evaluations;
    const Complex sine = sin_pi(z);
    if (abs(sine).to_double() < options_.min_sin) {
      fail(ErrorKind::pole_proximity, "contour passes within reach of a pole at z = " + z.re.to_string(10) + " + " +
                                          z.im.to_string(10) + "i");
    }
    return H_.numerator(z, ctx_) / sine;
  }

  Complex rule(const Complex& a, const Complex& b) {
    const Complex half = (b - a) / Real(2L, ctx_.working_bits());
    const Complex mid = (a + b) / Real(2L, ctx_.working_bits());
    Complex acc(ctx_.working_bits());
    for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
      acc += eval(mid + half * rule_.nodes[i]) * rule_.weights[i];
    }
    return acc * half;
  }

  Complex adapt(const Complex& a, const Complex& b, const Complex& whole, double tol_abs, int depth) {
    const Complex m = (a + b) / Real(2L, ctx_.working_bits());
    Complex left = rule(a, m);
    Complex right = rule(m, b);
    Complex halves = left + right;
    if (abs(halves - whole).to_double() <= tol_abs) return halves;
    if (depth >= options_.max_depth) {
      fail(ErrorKind::non_convergence, "contour quadrature did not converge after " +
                                           std::to_string(options_.max_depth) + " refinements");
    }
    return adapt(a, m, left, tol_abs / 2, depth + 1) + adapt(m, b, right, tol_abs / 2, depth + 1);
  }

  long evaluations = 0;

 private:
  const ContourIntegrand& H_;
  const PrecisionContext& ctx_;
  const QuadratureOptions& options_;
  const GaussLegendreRule& rule_;
};

struct Panel {
  Complex a;
  Complex b;
  Complex coarse;
  double length;
  int leg;
};

}  // namespace

RectangleIntegral integrate_rectangle(const ContourIntegrand& H, const RectContour& contour,
                                      const PrecisionContext& ctx, const QuadratureOptions& options) {
  if (!(options.tol > 0)) fail(ErrorKind::invalid_parameters, "quadrature tolerance must be positive");
  const Bits bits = ctx.working_bits();
  const Real& h = contour.height;
  const std::array<Complex, 4> vertices = {
      Complex(contour.left.with_precision(bits), -h.with_precision(bits)),
      Complex(contour.right.with_precision(bits), -h.with_precision(bits)),
      Complex(contour.right.with_precision(bits), h.with_precision(bits)),
      Complex(contour.left.with_precision(bits), h.with_precision(bits)),
  };

  LegIntegrator integrator(H, ctx, options);
  std::vector<Panel> panels;
  double perimeter = 0;
  Complex coarse_total(bits);
  for (int leg = 0; leg < 4; ++leg) {
    const Complex& start = vertices[static_cast<std::size_t>(leg)];
    const Complex& end = vertices[static_cast<std::size_t>((leg + 1) % 4)];
    if (!crosses_cut_safely(H)) check_branch_cut(H, start, end, bits);
    const double length = abs(end - start).to_double();
    perimeter += length;
    const long count = std::max(1L, static_cast<long>(std::ceil(length)));
    const Complex step = (end - start) / Real(count, bits);
    for (long i = 0; i < count; ++i) {
      Complex a = start + step * Real(i, bits);
      Complex b = i + 1 == count ? end : start + step * Real(i + 1, bits);
      Complex coarse = integrator.rule(a, b);
      coarse_total += coarse;
      panels.push_back({std::move(a), std::move(b), std::move(coarse), length / static_cast<double>(count), leg});
    }
  }

  RectangleIntegral out;
  double scale = abs(coarse_total).to_double();
  for (int attempt = 0; attempt < 3; ++attempt) {
    if (!(scale > 0)) {
      scale = 0;
      for (const Panel& p : panels) scale += abs(p.coarse).to_double();
    }
    std::array<Complex, 4> legs = {Complex(bits), Complex(bits), Complex(bits), Complex(bits)};
    for (const Panel& p : panels) {
      const double tol_abs = options.tol * scale * p.length / perimeter;
      legs[static_cast<std::size_t>(p.leg)] += integrator.adapt(p.a, p.b, p.coarse, tol_abs, 0);
    }
    Complex total = legs[0] + legs[1] + legs[2] + legs[3];
    const double refined = abs(total).to_double();
    out.legs = std::move(legs);
    out.value = std::move(total);
    // A heavily cancelling total needs a tighter absolute tolerance.
    if (refined >= scale / 4 || refined == 0) break;
    scale = refined;
  }
  if (options.orientation == Orientation::clockwise) {
    out.value = -out.value;
    for (Complex& leg : out.legs) leg = -leg;
  }
  for (std::size_t i = 0; i < 4; ++i) out.leg_mags[i] = abs(out.legs[i]);
  out.evaluations = integrator.evaluations;
  return out;
}

ResidueCheck residue_identity_check(const KernelSpec& kernel, const QuadraticForm& q, const mpq_class& x,
                                    const mpq_class& u, const PrecisionContext& ctx,
                                    const QuadratureOptions& options) {
  const Bits bits = ctx.working_bits();
  ResidueCheck out;
  out.contour = RectContour::around(q, x, u, bits);
  const ContourIntegrand H{kernel, q, x};
  RectangleIntegral integral = integrate_rectangle(H, out.contour, ctx, options);
  out.sum = alternating_sum(kernel, q, x, ctx);
  // Res_{z=n} H = (-1)^n K(x - q(n)) h(n) / π, so 2πi Σ Res = 2i S.
  out.discrete = Complex(out.sum.value.im * -2L, out.sum.value.re * 2L);
  out.quad = std::move(integral.value);
  out.leg_mags = std::move(integral.leg_mags);
  const Real denom = abs(out.discrete);
  out.rel_err = denom.is_zero() ? abs(out.quad) : abs(out.quad - out.discrete) / denom;
  return out;
}

}  // namespace osc
