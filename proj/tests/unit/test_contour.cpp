#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "osc/contour.hpp"
#include "osc/error.hpp"

using namespace osc;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::io;
}

KernelSpec exp_sqrt(Constant c) { return KernelSpec(kernel::ExpSqrt{std::move(c)}); }

}  // namespace

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  const auto& rule = gauss_legendre(32, 192);
  ASSERT_EQ(rule.nodes.size(), 32u);
  Real sum_w(0L, 192), sum_x62(0L, 192);
  for (std::size_t i = 0; i < 32; ++i) {
    sum_w += rule.weights[i];
    sum_x62 += rule.weights[i] * pow(rule.nodes[i], 62L);
  }
  EXPECT_LE(abs(sum_w - Real(2L, 192)).to_double(), 1e-50);
  EXPECT_LE(relative_difference(sum_x62, Real(mpq_class(2, 63), 192)), 1e-50);
}

TEST(IntegrateRectangle, CscAroundOrigin) {
  const PrecisionContext ctx(192);
  const Bits bits = ctx.working_bits();
  const ContourIntegrand H{KernelSpec(kernel::Power{0}), QuadraticForm::squares(), 100};
  const RectContour c{Real(-0.55, bits), Real(0.55, bits), Real(0.55, bits)};
  const auto r = integrate_rectangle(H, c, ctx);
  EXPECT_LE(abs(r.value.re).to_double(), 1e-17);
  EXPECT_NEAR(r.value.im.to_double(), 2.0, 1e-17);
}

TEST(IntegrateRectangle, OrientationNegates) {
  const PrecisionContext ctx(192);
  const ContourIntegrand H{exp_sqrt(Constant(1)), QuadraticForm::squares(), 20};
  const auto c = RectContour::around(H.q, H.x, 1, ctx.working_bits());
  QuadratureOptions cw;
  cw.orientation = Orientation::clockwise;
  const auto a = integrate_rectangle(H, c, ctx);
  const auto b = integrate_rectangle(H, c, ctx, cw);
  EXPECT_EQ(a.value.re, -b.value.re);
  EXPECT_EQ(a.value.im, -b.value.im);
}

TEST(IntegrateRectangle, HeightIndependence) {
  const PrecisionContext ctx(256);
  QuadratureOptions opt;
  opt.tol = 1e-30;
  const ContourIntegrand H{exp_sqrt(Constant(1)), QuadraticForm::squares(), 50};
  const auto c1 = RectContour::around(H.q, H.x, 1, ctx.working_bits());
  const auto c2 = RectContour::around(H.q, H.x, 2, ctx.working_bits());
  EXPECT_LE(relative_difference(c2.height, c1.height * 2L), 1e-40);
  const auto a = integrate_rectangle(H, c1, ctx, opt);
  const auto b = integrate_rectangle(H, c2, ctx, opt);
  EXPECT_LE(abs(a.value - b.value).to_double(), 10 * opt.tol * abs(a.value).to_double());
}

TEST(IntegrateRectangle, PoleProximity) {
  const PrecisionContext ctx(128);
  const Bits bits = ctx.working_bits();
  const ContourIntegrand H{exp_sqrt(Constant(1)), QuadraticForm::squares(), 20};
  const RectContour c{Real(-2.5, bits), Real(2.5, bits), Real(1e-6, bits)};
  EXPECT_EQ(kind_of([&] { integrate_rectangle(H, c, ctx); }), ErrorKind::pole_proximity);
}

TEST(IntegrateRectangle, BranchCutIsRejected) {
  const PrecisionContext ctx(128);
  const Bits bits = ctx.working_bits();
  const ContourIntegrand H{exp_sqrt(Constant(1)), QuadraticForm::squares(), 2};
  const RectContour c{Real(-3.5, bits), Real(3.5, bits), Real(1L, bits)};
  EXPECT_EQ(kind_of([&] { integrate_rectangle(H, c, ctx); }), ErrorKind::domain);
}

TEST(IntegrateRectangle, RejectsKernelsWithoutContinuation) {
  const PrecisionContext ctx(128);
  const ContourIntegrand H{KernelSpec(kernel::Rademacher{kernel::RademacherTerm::p2}), QuadraticForm::squares(), 20};
  const auto c = RectContour::around(H.q, H.x, 1, ctx.working_bits());
  EXPECT_EQ(kind_of([&] { integrate_rectangle(H, c, ctx); }), ErrorKind::invalid_parameters);
}

TEST(RectContour, LegPlacement) {
  const Bits bits = 128;
  const auto c = RectContour::around(QuadraticForm::squares(), 50, 1, bits);
  // 7.5 lies beyond the branch point √50, so the leg sits halfway from 7 to it.
  EXPECT_NEAR(c.right.to_double(), (7.0 + std::sqrt(50.0)) / 2, 1e-12);
  EXPECT_NEAR(c.left.to_double(), -(7.0 + std::sqrt(50.0)) / 2, 1e-12);
  EXPECT_GT(c.shift, 0);
  EXPECT_NEAR(c.height.to_double(), std::sqrt(50.0), 1e-12);
  const auto d = RectContour::around(QuadraticForm::squares(), 57, 1, bits);
  EXPECT_NEAR(d.right.to_double(), 7.5, 1e-15);
  EXPECT_NEAR(d.left.to_double(), -7.5, 1e-15);
  EXPECT_EQ(d.shift, 0);
}

TEST(ResidueIdentity, SquaresExpSqrt) {
  const PrecisionContext ctx(320);
  QuadratureOptions opt;
  opt.tol = 1e-30;
  const auto r = residue_identity_check(exp_sqrt(Constant(1)), QuadraticForm::squares(), 50, 1, ctx, opt);
  EXPECT_LE(r.rel_err.to_double(), 1e-15);
  EXPECT_EQ(r.sum.term_count, 15);
}

TEST(ResidueIdentity, Pentagonal) {
  const PrecisionContext ctx(320);
  const auto r = residue_identity_check(exp_sqrt(Constant::pi_sqrt(mpq_class(2, 3))), QuadraticForm::pentagonal(),
                                        100, 1, ctx);
  EXPECT_LE(r.rel_err.to_double(), 1e-12);
}

TEST(ResidueIdentity, SingleResidue) {
  const PrecisionContext ctx(192);
  const auto r = residue_identity_check(exp_sqrt(Constant(2)), QuadraticForm::squares(), mpq_class(1, 2), 1, ctx);
  EXPECT_EQ(r.sum.term_count, 1);
  EXPECT_LE(r.rel_err.to_double(), 1e-15);
}

TEST(ResidueIdentity, OtherAnalyticKernels) {
  const PrecisionContext ctx(256);
  const auto bessel = residue_identity_check(KernelSpec(kernel::Bessel{0, Constant(1)}), QuadraticForm::squares(), 30,
                                             1, ctx);
  EXPECT_LE(bessel.rel_err.to_double(), 1e-15);
  const auto power = residue_identity_check(KernelSpec(kernel::Power{mpq_class(3, 2)}, Weight{1, 4, 2}),
                                            QuadraticForm::squares(), 20, 1, ctx);
  EXPECT_LE(power.rel_err.to_double(), 1e-15);
}

TEST(ResidueIdentity, ComplexExponentInstance) {
  const PrecisionContext ctx(320);
  const KernelSpec k(kernel::ComplexExp{Constant(1), Constant(50)});
  const auto r = residue_identity_check(k, QuadraticForm(mpq_class(1, 10000), 0, 0), 100, 6, ctx);
  EXPECT_LE(r.rel_err.to_double(), 1e-12);
}

TEST(ResidueIdentity, ErrorShrinksWithTolerance) {
  const PrecisionContext ctx(256);
  const auto kernel = exp_sqrt(Constant::pi_sqrt(mpq_class(2, 3)));
  for (double tol : {1e-6, 1e-9, 1e-12}) {
    QuadratureOptions opt;
    opt.tol = tol;
    const auto r = residue_identity_check(kernel, QuadraticForm::pentagonal(), 50, 1, ctx, opt);
    EXPECT_LE(r.rel_err.to_double(), 100 * tol) << tol;
  }
}

TEST(ResidueIdentity, VerticalLegsCarryDeltaExponent) {
  const PrecisionContext ctx(320);
  const double c = std::numbers::pi * std::sqrt(2.0 / 3.0);
  const auto r = residue_identity_check(exp_sqrt(Constant::pi_sqrt(mpq_class(2, 3))), QuadraticForm::pentagonal(),
                                        400, 1, ctx);
  const double wc = maximize_delta(1.5, c).w * c;
  const double rate = r.leg_mags[1].log_abs() / 20.0;
  EXPECT_GE(rate, wc - 0.1);
  EXPECT_LE(rate, wc + 0.1);
}
