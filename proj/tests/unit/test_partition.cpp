#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <thread>

#include "oracles.hpp"
#include "osc/error.hpp"
#include "osc/partition.hpp"

using namespace osc;

namespace {

Real ratio_to_exact(const Real& approx, long n, Bits bits) { return approx / Real(partition_exact(n), bits); }

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / (std::string(name) + "_" + std::to_string(::getpid()));
}

}  // namespace

TEST(PartitionExact, SmallValues) {
  EXPECT_EQ(partition_exact(0), 1);
  EXPECT_EQ(partition_exact(5), 7);
  EXPECT_EQ(partition_exact(20), 627);
  EXPECT_EQ(partition_exact(100), mpz_class("190569292"));
}

TEST(PartitionExact, MatchesEnumeration) {
  for (long n = 0; n <= 30; ++n) EXPECT_EQ(partition_exact(n), oracle::partitions_enumerated(n)) << n;
}

TEST(PartitionExact, MatchesCoinChangeOracle) {
  const auto dp = oracle::partitions_dp(200);
  for (long n = 0; n <= 200; ++n) ASSERT_EQ(partition_exact(n), dp[n]) << n;
}

TEST(PartitionExact, NegativeIndexIsDomainError) {
  try {
    partition_exact(-1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain);
  }
}

TEST(PartitionTable, MonotoneAndRecurrence) {
  ExactPartitionTable table(400);
  const auto v = table.snapshot();
  ASSERT_EQ(v.size(), 401u);
  EXPECT_EQ(v[0], 1);
  for (long k = 1; k <= 400; ++k) {
    EXPECT_GE(v[k], v[k - 1]);
    mpz_class sum = 0;
    for (long j = 1; pentagonal(j) <= k || pentagonal(-j) <= k; ++j) {
      const mpz_class sign = (j % 2 == 1) ? 1 : -1;
      if (pentagonal(j) <= k) sum += sign * v[k - pentagonal(j)];
      if (pentagonal(-j) <= k) sum += sign * v[k - pentagonal(-j)];
    }
    ASSERT_EQ(sum, v[k]) << k;
  }
}

TEST(PartitionTable, ConcurrentGrowthAgrees) {
  ExactPartitionTable table;
  std::vector<std::thread> workers;
  std::vector<mpz_class> seen(8);
  for (int i = 0; i < 8; ++i) {
    workers.emplace_back([&, i] { seen[i] = table.at(300 + 50 * i); });
  }
  for (auto& w : workers) w.join();
  const auto dp = oracle::partitions_dp(650);
  for (int i = 0; i < 8; ++i) EXPECT_EQ(seen[i], dp[300 + 50 * i]);
}

TEST(PartitionTable, SaveLoadRoundTrip) {
  const auto path = temp_file("ptab_roundtrip");
  ExactPartitionTable table(250);
  table.save(path);
  const auto loaded = ExactPartitionTable::load(path);
  EXPECT_EQ(loaded, table.snapshot());
  std::filesystem::remove(path);
}

TEST(PartitionTable, LoadRejectsTamperedValue) {
  const auto path = temp_file("ptab_tampered");
  ExactPartitionTable(40).save(path);
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(-1, std::ios::end);
    f.put('\x7f');
  }
  EXPECT_THROW(ExactPartitionTable::load(path), Error);
  std::filesystem::remove(path);
}

TEST(PartitionTable, LoadRejectsBadMagicAndMissingFile) {
  const auto path = temp_file("ptab_magic");
  {
    std::ofstream f(path, std::ios::binary);
    f << "NOPE0000000000000000";
  }
  EXPECT_THROW(ExactPartitionTable::load(path), Error);
  std::filesystem::remove(path);
  try {
    ExactPartitionTable::load(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
  }
}

TEST(PntChecksum, Examples) {
  EXPECT_EQ(pnt_checksum(1), 0);
  EXPECT_EQ(pnt_checksum(6), 0);
  EXPECT_EQ(partition_exact(6) - partition_exact(5) - partition_exact(4) + partition_exact(1), 0);
  EXPECT_EQ(pnt_checksum(1000), 0);
}

TEST(PntChecksum, ZeroThroughTwoThousand) {
  ExactPartitionTable table(2000);
  for (long x = 1; x <= 2000; ++x) ASSERT_EQ(pnt_checksum(x, table), 0) << x;
}

TEST(PntChecksum, DetectsCorruption) {
  auto values = oracle::partitions_dp(60);
  values[37] += 1;
  EXPECT_NE(pnt_checksum(37, values), 0);
  EXPECT_NE(pnt_checksum(42, values), 0);  // 42 - G_2 = 37
  EXPECT_EQ(pnt_checksum(36, values), 0);
}

TEST(Rademacher, P1RatioAtFiveThousand) {
  const PrecisionContext ctx(required_bits(5000, 3));
  const double r = ratio_to_exact(p1(Real(5000L, ctx.bits), ctx), 5000, ctx.working_bits()).to_double();
  EXPECT_GT(r, 0.98);
  EXPECT_LT(r, 1.02);
}

TEST(Rademacher, P2WithinSqrtP) {
  const PrecisionContext ctx(160);
  const Bits bits = ctx.working_bits();
  const Real exact(partition_exact(100), bits);
  const Real gap = abs(p2(Real(100L, bits), ctx) - exact);
  EXPECT_LE(gap, sqrt(exact) * 10L);
}

TEST(Rademacher, P2RelativeErrorDecays) {
  for (long x : {1000L, 10000L}) {
    const PrecisionContext ctx(required_bits(static_cast<double>(x), 3));
    const double r = ratio_to_exact(p2(Real(x, ctx.bits), ctx), x, ctx.working_bits()).to_double();
    EXPECT_LE(std::abs(r - 1), 1 / std::sqrt(static_cast<double>(x))) << x;
  }
}

TEST(Rademacher, P3AlternatesAndP4IsSum) {
  const PrecisionContext ctx(160);
  for (long x = 1; x < 60; ++x) {
    EXPECT_LT((p3(x + 1, ctx) / p3(x, ctx)).sign(), 0) << x;
    const Real sum = p2(Real(x, ctx.working_bits()), ctx) + p3(x, ctx);
    EXPECT_LE(relative_difference(p4(x, ctx), sum), 1e-40);
  }
}

TEST(Rademacher, P4TracksPartitionsClosely) {
  const PrecisionContext ctx(192);
  const Real exact(partition_exact(200), ctx.working_bits());
  EXPECT_LT(abs(p4(200, ctx) - exact).to_double(), std::pow(exact.to_double(), 0.25));
}

TEST(Rademacher, RejectsNonPositive) {
  const PrecisionContext ctx(128);
  EXPECT_THROW(p3(0, ctx), Error);
  EXPECT_THROW(p1(Real(0L, 128), ctx), Error);
}

TEST(Q1Kernel, DerivativeConsistency) {
  const PrecisionContext ctx(192);
  const Bits bits = ctx.working_bits();
  auto i0_of = [&](const Real& n) {
    const Real arg = Real::pi(bits) * sqrt((n + Real(mpq_class(1, 24), bits)) / 3L);
    return bessel_i(0, arg, ctx);
  };
  const Real n(10L, bits);
  const Real h = pow(Real(2L, bits), -20L);
  const Real fd = (i0_of(n + h) - i0_of(n - h)) / (h * 2L);
  EXPECT_LE(relative_difference(fd, q1_kernel(n, ctx)), 1e-10);
}

TEST(Q1Kernel, PositiveAndIncreasing) {
  const PrecisionContext ctx(160);
  Real prev = q1_kernel(Real(0.01, 192), ctx);
  EXPECT_GT(prev.sign(), 0);
  for (double n : {0.5, 1.0, 3.0, 10.0, 100.0, 1000.0}) {
    const Real v = q1_kernel(Real(n, 192), ctx);
    EXPECT_GT(v, prev) << n;
    prev = v;
  }
}

TEST(Q1Kernel, LogGrowthRate) {
  const double target = std::numbers::pi / std::sqrt(3.0);
  auto rate = [](double n) {
    const PrecisionContext ctx(required_bits(n, 2));
    return q1_kernel(Real(n, ctx.bits), ctx).log_abs() / std::sqrt(n);
  };
  // Lower-order terms keep the n = 10^4 value about 4.6% below the limit.
  EXPECT_NEAR(rate(1e4) / target, 1.0, 0.05);
  EXPECT_NEAR(rate(1e6) / target, 1.0, 0.02);
  EXPECT_LT(std::abs(rate(1e6) - target), std::abs(rate(1e4) - target));
}

TEST(P5Kernel, PositiveAndSymmetric) {
  const PrecisionContext ctx(160);
  for (long n = 1; n <= 50; n += 7) {
    const Real x(n, ctx.working_bits());
    for (int a = 1; a <= 4; ++a) EXPECT_GT(p5_kernel(x, a, ctx).sign(), 0);
    EXPECT_LE(relative_difference(p5_kernel(x, 1, ctx), p5_kernel(x, 4, ctx)), 1e-40);
    EXPECT_LE(relative_difference(p5_kernel(x, 2, ctx), p5_kernel(x, 3, ctx)), 1e-40);
  }
}

TEST(P5Kernel, LogGrowthRate) {
  const double target = 2 * std::numbers::pi / std::sqrt(15.0);
  auto rate = [](double n) {
    const PrecisionContext ctx(required_bits(n, 2));
    return p5_kernel(Real(n, ctx.bits), 1, ctx).log_abs() / std::sqrt(n);
  };
  // The (60n-A)^{-3/8} prefactor costs about 2.75% at n = 10^4.
  EXPECT_NEAR(rate(1e4) / target, 1.0, 0.03);
  EXPECT_NEAR(rate(1e6) / target, 1.0, 0.02);
}

TEST(P5Kernel, ScaleAndShift) {
  const PrecisionContext ctx(160);
  const Real x(20L, ctx.working_bits());
  const Real base = p5_kernel(x, 2, ctx);
  EXPECT_LE(relative_difference(p5_kernel(x, 2, ctx, {1, 3}), base * 3L), 1e-40);
  EXPECT_LT(p5_kernel(x, 2, ctx, {7, 1}), base);
  EXPECT_THROW(p5_kernel(x, 5, ctx), Error);
  EXPECT_THROW(p5_kernel(x, 0, ctx), Error);
}

TEST(Meinardus, UsualPartitionsReproduceP2) {
  const PrecisionContext ctx(192);
  const auto params = MeinardusParams::usual_partitions();
  for (long n : {5L, 50L, 500L}) {
    const Real x(n, ctx.working_bits());
    EXPECT_LE(relative_difference(meinardus_kernel(params, x, ctx), p2(x, ctx)), 1e-20) << n;
  }
}

TEST(Meinardus, LargeRDropsCorrection) {
  const PrecisionContext ctx(160);
  auto params = MeinardusParams::usual_partitions();
  params.r_exp = 200;
  const Real x(50L, ctx.working_bits());
  auto bare = params;
  bare.r_exp = 100000;
  const Real g = params.g(x, ctx.working_bits());
  const Real k = params.k(x, ctx.working_bits());
  const Real expected = g * exp(sqrt(k));
  EXPECT_LE(relative_difference(meinardus_kernel(bare, x, ctx), expected), 1e-30);
  EXPECT_LE(relative_difference(meinardus_kernel(params, x, ctx), expected), 1e-10);
}

TEST(Meinardus, LinearExponentSubstitution) {
  const PrecisionContext ctx(160);
  MeinardusParams params;
  params.theta = 1;
  params.q_exp = 1;
  params.r_exp = 2;
  params.g = RationalFunction{};
  params.k = RationalFunction{{Constant(0), Constant(1)}, {Constant(1)}};
  params.h = RationalFunction{{Constant(3), Constant(1)}, {Constant(1)}};
  const Real x(7L, ctx.working_bits());
  const Real expected = exp(x) * (Real(1L, ctx.working_bits()) - Real(mpq_class(1, 100), ctx.working_bits()));
  EXPECT_LE(relative_difference(meinardus_kernel(params, x, ctx), expected), 1e-40);
}

TEST(Meinardus, ValidationAndDomain) {
  auto params = MeinardusParams::usual_partitions();
  params.s_exp = 1;
  EXPECT_THROW(params.validate(), Error);
  params = MeinardusParams::usual_partitions();
  params.theta = 0;
  EXPECT_THROW(params.validate(), Error);

  const PrecisionContext ctx(128);
  params = MeinardusParams::usual_partitions();
  // 24n - 1 < 0 below n = 1/24.
  try {
    meinardus_kernel(params, Real(0.01, 160), ctx);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain);
  }
}
