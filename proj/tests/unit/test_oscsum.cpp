#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "osc/error.hpp"
#include "osc/oscsum.hpp"

using namespace osc;

namespace {

const double kPiSqrt23 = std::numbers::pi * std::sqrt(2.0 / 3.0);

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::io;
}

}  // namespace

TEST(QuadraticForm, StrictIndexRange) {
  const auto sq = QuadraticForm::squares();
  auto r = sq.index_range(4);
  EXPECT_EQ(r.lo, -1);
  EXPECT_EQ(r.hi, 1);
  r = sq.index_range(mpq_class(401, 100));
  EXPECT_EQ(r.lo, -2);
  EXPECT_EQ(r.hi, 2);
  EXPECT_TRUE(sq.index_range(0).empty());

  const auto pent = QuadraticForm::pentagonal();
  r = pent.index_range(2);
  EXPECT_EQ(r.lo, 0);
  EXPECT_EQ(r.hi, 1);
  EXPECT_EQ(pent(-1), 2);
  EXPECT_EQ(pent(2), 5);
}

TEST(QuadraticForm, RangeMatchesScan) {
  const QuadraticForm q(mpq_class(7, 3), mpq_class(5, 4), mpq_class(-2));
  for (long xi = -3; xi < 300; xi += 7) {
    const mpq_class x(xi, 3);
    const auto r = q.index_range(x);
    long lo = 1000, hi = -1000;
    for (long n = -100; n <= 100; ++n) {
      if (q(n) < x) {
        lo = std::min(lo, n);
        hi = std::max(hi, n);
      }
    }
    if (hi < lo) {
      EXPECT_TRUE(r.empty()) << xi;
    } else {
      EXPECT_EQ(r.lo, lo) << xi;
      EXPECT_EQ(r.hi, hi) << xi;
    }
  }
}

TEST(QuadraticForm, RejectsNonPositiveLeadingCoefficient) {
  EXPECT_EQ(kind_of([] { QuadraticForm(0, 1, 0); }), ErrorKind::invalid_parameters);
}

TEST(AlternatingSum, SingleTerm) {
  const PrecisionContext ctx(128);
  const KernelSpec k(kernel::ExpSqrt{Constant(2)}, Weight{1, 3, 2});
  const QuadraticForm q(1, 0, 5);
  const mpq_class x(59, 10);  // one index: 5 < x < 6
  const auto rep = alternating_sum(k, q, x, ctx);
  ASSERT_EQ(rep.term_count, 1);
  const Bits bits = ctx.working_bits();
  const Real expected = exp(Real(2L, bits) * sqrt(Real(mpq_class(9, 10), bits))) * 9L;
  EXPECT_LE(relative_difference(rep.value.re, expected), 1e-35);
  EXPECT_TRUE(rep.value.im.is_zero());
}

TEST(AlternatingSum, P4OverSquaresTracksSqrtPartition) {
  const PrecisionContext ctx(required_bits(1000, 3));
  const auto rep = alternating_sum(KernelSpec(kernel::Rademacher{kernel::RademacherTerm::p4}), QuadraticForm::squares(), 1000, ctx);
  const Bits bits = ctx.working_bits();
  const Real scale = pow(Real(2L, bits), Real(-0.75, bits)) * pow(Real(1000L, bits), Real(-0.25, bits)) *
                     sqrt(Real(partition_exact(1000), bits));
  const double r = (rep.abs_value / scale).to_double();
  EXPECT_GT(r, 0.5);
  EXPECT_LT(r, 2.0);
}

TEST(AlternatingSum, P2PentagonalCancellation) {
  const PrecisionContext ctx(required_bits(2000, 3));
  const auto rep = alternating_sum(KernelSpec(kernel::Rademacher{kernel::RademacherTerm::p2}), QuadraticForm::pentagonal(), 2000, ctx);
  const double ratio = rep.abs_value.log_abs() / Real(partition_exact(2000), 64).log_abs();
  EXPECT_LE(ratio, 0.07 + 0.05);
}

TEST(AlternatingSum, ReorderingInvariance) {
  const PrecisionContext ctx(required_bits(2500, 2.6));
  const KernelSpec k(kernel::ExpSqrt{Constant::pi_sqrt(mpq_class(2, 3))});
  SumOptions asc;
  asc.order = SumOrder::ascending;
  for (long x : {150L, 900L, 2500L}) {
    const auto a = alternating_sum(k, QuadraticForm::pentagonal(), x, ctx);
    const auto b = alternating_sum(k, QuadraticForm::pentagonal(), x, ctx, asc);
    EXPECT_LE(relative_difference(a.value.re, b.value.re), std::ldexp(1.0, -static_cast<int>(ctx.bits - 16))) << x;
  }
}

TEST(AlternatingSum, PrecisionRefinement) {
  const KernelSpec k(kernel::ExpSqrt{Constant(1)});
  for (Bits bits : {192L, 320L}) {
    const PrecisionContext ctx(bits);
    const auto a = alternating_sum(k, QuadraticForm::squares(), 3000, ctx);
    const auto b = alternating_sum(k, QuadraticForm::squares(), 3000, ctx.refined(64));
    EXPECT_LE(relative_difference(a.value.re, b.value.re), std::ldexp(1.0, -static_cast<int>(bits - 16)));
  }
}

TEST(AlternatingSum, TermCountAndRatio) {
  const PrecisionContext ctx(160);
  const auto rep = alternating_sum(KernelSpec(kernel::ExpSqrt{Constant(1)}), QuadraticForm::squares(), 101, ctx);
  EXPECT_EQ(rep.term_count, QuadraticForm::squares().index_range(101).count());
  EXPECT_EQ(rep.term_count, 21);
  ASSERT_TRUE(rep.predicted_bound && rep.ratio);
  EXPECT_LE(relative_difference(*rep.ratio, rep.abs_value / *rep.predicted_bound), 1e-30);

  const auto bare = alternating_sum(KernelSpec(kernel::Power{mpq_class(1, 2)}), QuadraticForm::squares(), 101, ctx);
  EXPECT_FALSE(bare.ratio.has_value());
}

TEST(AlternatingSum, Errors) {
  const PrecisionContext ctx(128);
  const KernelSpec k(kernel::ExpSqrt{Constant(1)});
  EXPECT_EQ(kind_of([&] { alternating_sum(k, QuadraticForm::squares(), 0, ctx); }), ErrorKind::empty_range);
  EXPECT_EQ(kind_of([&] { alternating_sum(k, QuadraticForm::squares(), 1000000, ctx); }),
            ErrorKind::precision_insufficient);
  EXPECT_EQ(kind_of([&] { KernelSpec(kernel::ExpSqrt{Constant(-1)}).validate(); }), ErrorKind::invalid_parameters);
  EXPECT_EQ(kind_of([&] { KernelSpec(kernel::ComplexExp{Constant(3), Constant(0)}).validate(); }),
            ErrorKind::invalid_parameters);
}

TEST(AlternatingSum, OtherKernelFamiliesRun) {
  const PrecisionContext ctx(required_bits(500, 3));
  const auto pent = QuadraticForm::pentagonal();
  for (const KernelSpec& k : std::vector<KernelSpec>{
       KernelSpec(kernel::Rademacher{kernel::RademacherTerm::sqrt_p1}), KernelSpec(kernel::Bessel{1, Constant(2)}),
        KernelSpec(kernel::Meinardus{}), KernelSpec(kernel::DistinctParts{}), KernelSpec(kernel::Mod5{2, {}})}) {
    const auto rep = alternating_sum(k, pent, 500, ctx);
    EXPECT_TRUE(rep.abs_value.is_finite()) << k.name();
    EXPECT_GT(rep.term_count, 30) << k.name();
  }
}

TEST(Delta, Examples) {
  EXPECT_EQ(delta(0, 1, std::numbers::pi), 0);
  EXPECT_NEAR(delta(1, 1, std::numbers::pi), std::sqrt((1 + std::sqrt(5.0)) / 2) - 1, 1e-15);
  EXPECT_NEAR(delta(1, 1, std::numbers::pi), 0.27202, 1e-5);
  // With √a = π/c the linear terms cancel and Δ decays to 0 from above.
  EXPECT_GT(delta(10, 1, std::numbers::pi), 0);
  EXPECT_LT(delta(10, 1, std::numbers::pi), delta(1, 1, std::numbers::pi));
  EXPECT_NEAR(delta(1e4, 1, std::numbers::pi), 0, 1e-3);
  EXPECT_LT(delta(10, 1, 3.0), 0);
}

TEST(Delta, DerivativeMatchesFiniteDifference) {
  for (double r : {0.05, 0.3, 1.0, 4.0}) {
    const double h = 1e-6;
    const double fd = (delta(r + h, 1.5, 2.0) - delta(r - h, 1.5, 2.0)) / (2 * h);
    EXPECT_NEAR(delta_derivative(r, 1.5, 2.0), fd, 1e-6) << r;
  }
}

TEST(MaximizeDelta, PartitionExponent) {
  const auto m = maximize_delta(1.5, kPiSqrt23);
  EXPECT_FALSE(m.unbounded);
  EXPECT_NEAR(m.w * kPiSqrt23 / kPiSqrt23, 0.30, 0.02);
  EXPECT_LE(std::abs(delta_derivative(m.alpha_star, 1.5, kPiSqrt23)), 1e-12);
  EXPECT_EQ(m.w, std::min(1.0, delta(m.alpha_star, 1.5, kPiSqrt23)));
}

TEST(MaximizeDelta, AgreesWithGridSearch) {
  for (auto [a, c] : {std::pair{1.5, kPiSqrt23}, std::pair{1.0, 1.0}, std::pair{1.0, std::numbers::pi / std::sqrt(6.0)}}) {
    const auto m = maximize_delta(a, c);
    const double grid = oracle::delta_grid_argmax(a, c, delta_search_limit(a, c), 1e-6);
    EXPECT_NEAR(m.alpha_star, grid, 1e-5) << a << " " << c;
  }
}

TEST(MaximizeDelta, SmallGrowthGivesSmallExponent) {
  // For a > 0 the √r term dominates near 0, so Δ is positive somewhere and the
  // maximum is close to that of a^{1/4}√r - πr/c, namely √a c/(4π).
  const auto m = maximize_delta(1, 0.01);
  EXPECT_NEAR(m.w, 0.01 / (4 * std::numbers::pi), 1e-6);
}

TEST(BoundMain1, LogIdentityAndMonotone) {
  const PrecisionContext ctx(required_bits(10000, 3));
  const Constant c = Constant::pi_sqrt(mpq_class(2, 3));
  const Real b = bound_main1(mpq_class(3, 2), c, 10000, ctx);
  ASSERT_TRUE(b.is_finite());
  const double w = maximize_delta(1.5, kPiSqrt23).w;
  EXPECT_NEAR(b.log_abs() / 100.0, w * kPiSqrt23 + std::log(100.0) / 100.0, 1e-12);

  Real prev = bound_main1(mpq_class(3, 2), c, 10, ctx);
  for (long x : {20L, 100L, 1000L, 5000L}) {
    const Real v = bound_main1(mpq_class(3, 2), c, x, ctx);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(BoundMain1, EmpiricalSoundness) {
  const PrecisionContext ctx(required_bits(3000, 3));
  for (auto [a, c] : {std::pair{mpq_class(1), Constant(1)}, std::pair{mpq_class(3, 2), Constant::pi_sqrt(mpq_class(2, 3))},
                      std::pair{mpq_class(1), Constant(1, 1, mpq_class(1, 6))}}) {
    for (long x = 100; x <= 3000; x += 290) {
      const auto rep = alternating_sum(KernelSpec(kernel::ExpSqrt{c}), QuadraticForm(a, 0, 0), x, ctx);
      EXPECT_LE(rep.abs_value, bound_main1(a, c, x, ctx) * 10L) << x;
    }
  }
}

TEST(ComplexSum, RealCaseMatchesRealPath) {
  const PrecisionContext ctx(256);
  const mpq_class T(400);
  const auto cx = complex_alternating_sum(Constant(1), Constant(0), T, 60, ctx);
  const auto re = alternating_sum(KernelSpec(kernel::ExpSqrt{Constant(1)}), QuadraticForm(1 / T, 0, 0), 60, ctx);
  EXPECT_EQ(cx.term_count, re.term_count);
  EXPECT_LE(relative_difference(cx.value.re, re.value.re), 1e-20);
  EXPECT_TRUE(cx.value.im.is_zero());
}

TEST(ComplexSum, ZeroExponentIsParity) {
  const PrecisionContext ctx(128);
  // ℓ² < 30·7 = 210 gives |ℓ| <= 14.
  const auto rep = complex_alternating_sum(Constant(0), Constant(0), 7, 30, ctx);
  EXPECT_EQ(rep.term_count, 29);
  EXPECT_EQ(rep.value.re.to_double(), 1.0);
  const auto odd = complex_alternating_sum(Constant(0), Constant(0), 8, 29, ctx);  // 232: |ℓ| <= 15
  EXPECT_EQ(odd.value.re.to_double(), -1.0);
}

TEST(ComplexSum, WithinMain2Bound) {
  const PrecisionContext ctx(256);
  const auto rep = complex_alternating_sum(Constant(1), Constant(50), 10000, 100, ctx);
  ASSERT_TRUE(rep.predicted_bound.has_value());
  EXPECT_LE(rep.abs_value, *rep.predicted_bound * 10L);
  EXPECT_FALSE(rep.value.im.is_zero());
}

TEST(ComplexSum, RejectsLargeBeta) {
  const PrecisionContext ctx(128);
  EXPECT_EQ(kind_of([&] { complex_alternating_sum(Constant(1), Constant(11), 100, 5, ctx); }),
            ErrorKind::invalid_parameters);
}

TEST(BoundMain2, Examples) {
  const Bits bits = 128;
  EXPECT_NEAR(main2_exponent(bits).to_double(), 0.4104846066, 1e-10);
  const Real T(10000L, bits), x(100L, bits);
  const Real zero = bound_main2(Real(0L, bits), Real(3L, bits), T, x, 0.05);
  EXPECT_NEAR(zero.to_double(), 50.0 + 100.0, 1e-12);
  EXPECT_GT(bound_main2(Real(1L, bits), Real(1L, bits), T, x, 0.05),
            bound_main2(Real(1L, bits), Real(-20L, bits), T, x, 0.05));
}

TEST(EmpiricalExponent, ExactLines) {
  std::vector<ExponentSample> s;
  for (double x : {100.0, 400.0, 900.0, 1600.0}) s.push_back({x, 0.5 * std::sqrt(x)});
  auto fit = empirical_exponent(s);
  EXPECT_NEAR(fit.w_hat, 0.5, 1e-12);
  EXPECT_NEAR(fit.residual, 0, 1e-12);
  for (auto& p : s) p.log_abs += 3;
  fit = empirical_exponent(s);
  EXPECT_NEAR(fit.w_hat, 0.5, 1e-12);
  EXPECT_NEAR(fit.intercept, 3, 1e-10);
}

TEST(EmpiricalExponent, Errors) {
  EXPECT_EQ(kind_of([] { empirical_exponent({{1, 1}, {2, 2}}); }), ErrorKind::invalid_parameters);
  EXPECT_EQ(kind_of([] { empirical_exponent({{4, 1}, {4, 2}, {4, 3}}); }), ErrorKind::degenerate_fit);
}

TEST(EmpiricalExponent, FittedRateBelowDeltaExponent) {
  const PrecisionContext ctx(required_bits(2000, 1));
  std::vector<ExponentSample> s;
  for (long x = 100; x <= 2000; x += 100) {
    const auto rep = alternating_sum(KernelSpec(kernel::ExpSqrt{Constant(1)}), QuadraticForm::squares(), x, ctx);
    s.push_back(ExponentSample::from_abs(static_cast<double>(x), rep.abs_value));
  }
  EXPECT_LT(empirical_exponent(s).w_hat, maximize_delta(1, 1).w);
}
