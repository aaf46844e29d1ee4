#include <string>

#include "osc/error.hpp"
#include "osc/partition.hpp"

namespace osc {

namespace {

// 24x - 1, required positive.
Real shifted_24(const Real& x) {
  Real t = x * 24L - 1L;
  if (t.sign() <= 0) fail(ErrorKind::domain, "kernel needs 24x > 1");
  return t;
}

// (c1/t - c2/(π t^{3/2})) e^{(π/k) √t} with c1 = √s, c2 = m√s.
Real rademacher_term(const Real& t, long s, long m, long k, Bits bits) {
  const Real pi = Real::pi(bits);
  const Real root_s = sqrt(Real(s, bits));
  const Real root_t = sqrt(t);
  Real front = root_s / t - root_s * m / (pi * t * root_t);
  return front * exp(pi * root_t / k);
}

}  // namespace

Real p1(const Real& x, const PrecisionContext& ctx) {
  if (x.sign() <= 0) fail(ErrorKind::domain, "p1 needs x > 0");
  const Bits bits = ctx.working_bits();
  const Real xw = x.with_precision(bits);
  const Real pi = Real::pi(bits);
  Real exponent = pi * sqrt(xw * 2L / 3L);
  return exp(exponent) / (sqrt(Real(3L, bits)) * xw * 4L);
}

Real p2(const Real& x, const PrecisionContext& ctx) {
  const Bits bits = ctx.working_bits();
  return rademacher_term(shifted_24(x.with_precision(bits)), 12, 6, 6, bits);
}

Real p3(long x, const PrecisionContext& ctx) {
  const Bits bits = ctx.working_bits();
  Real value = rademacher_term(shifted_24(Real(x, bits)), 6, 12, 12, bits);
  return x % 2 == 0 ? value : -value;
}

Real p4(long x, const PrecisionContext& ctx) { return p2(Real(x, ctx.working_bits()), ctx) + p3(x, ctx); }

Real q1_kernel(const Real& n, const PrecisionContext& ctx) {
  if (n.sign() <= 0) fail(ErrorKind::domain, "q1 kernel needs n > 0");
  const Bits bits = ctx.working_bits();
  const Real nu = n.with_precision(bits) + Real(mpq_class(1, 24), bits);
  const Real pi = Real::pi(bits);
  const Real root_nu = sqrt(nu);
  const Real z = pi * root_nu / sqrt(Real(3L, bits));
  return pi / (sqrt(Real(3L, bits)) * root_nu * 2L) * bessel_i(1, z, ctx);
}

Real p5_kernel(const Real& n, int a, const PrecisionContext& ctx, const Mod5Constants& constants) {
  if (a < 1 || a > 4) fail(ErrorKind::invalid_parameters, "mod-5 residue must be in 1..4");
  const Bits bits = ctx.working_bits();
  const Real t = n.with_precision(bits) * 60L - Real(constants.shift, bits);
  if (t.sign() <= 0) fail(ErrorKind::domain, "mod-5 kernel needs 60n > A");
  const Real pi = Real::pi(bits);
  const Real csc = Real(1L, bits) / sin(pi * a / 5L);
  const Real decay = pow(t, Real(mpq_class(-3, 8), bits));
  return Real(constants.scale, bits) * csc * decay * exp(pi * sqrt(t) / 15L);
}

Real RationalFunction::operator()(const Real& n, Bits bits) const {
  auto horner = [&](const std::vector<Constant>& coeffs) {
    Real acc(0L, bits);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
      acc = acc * n + it->evaluate(bits);
    }
    return acc;
  };
  if (denominator.empty()) fail(ErrorKind::invalid_parameters, "empty denominator");
  const Real den = horner(denominator);
  if (den.is_zero()) fail(ErrorKind::domain, "rational function has a pole here");
  return horner(numerator) / den;
}

void MeinardusParams::validate() const {
  if (theta <= 0 || r_exp <= 0 || q_exp <= 0) {
    fail(ErrorKind::invalid_parameters, "Meinardus exponents theta, r, q must be positive");
  }
  if (s_exp <= 0 || s_exp >= 1) fail(ErrorKind::invalid_parameters, "Meinardus s must lie in (0, 1)");
}

MeinardusParams MeinardusParams::usual_partitions() {
  MeinardusParams params;
  params.q_exp = 1;
  params.theta = mpq_class(1, 2);
  params.r_exp = mpq_class(1, 2);
  params.s_exp = mpq_class(1, 2);
  params.g.numerator = {Constant(1, 0, 12)};
  params.g.denominator = {Constant(-1), Constant(24)};
  const std::vector<Constant> linear = {Constant(mpq_class(-1, 36), 2, 1), Constant(mpq_class(2, 3), 2, 1)};
  params.h.numerator = linear;
  params.k.numerator = linear;
  return params;
}

Real meinardus_kernel(const MeinardusParams& params, const Real& n, const PrecisionContext& ctx) {
  params.validate();
  const Bits bits = ctx.working_bits();
  const Real nw = n.with_precision(bits);
  const Real g = params.g(nw, bits);
  const Real h = params.h(nw, bits);
  const Real k = params.k(nw, bits);
  if (g.sign() <= 0 || h.sign() <= 0 || k.sign() <= 0) {
    fail(ErrorKind::domain, "Meinardus g, h, k must be positive at n = " + n.to_string(12));
  }
  const Real one(1L, bits);
  Real value = pow(g, Real(params.q_exp, bits)) * exp(pow(k, Real(params.theta, bits)));
  return value * (one - pow(h, -Real(params.r_exp, bits)));
}

}  // namespace osc
