#include <benchmark/benchmark.h>

#include "osc/contour.hpp"
#include "osc/oscsum.hpp"
#include "osc/partition.hpp"
#include "osc/primes.hpp"

using namespace osc;

static void BM_PartitionTable(benchmark::State& state) {
  for (auto _ : state) {
    ExactPartitionTable table(state.range(0));
    benchmark::DoNotOptimize(table.at(state.range(0)));
  }
}
BENCHMARK(BM_PartitionTable)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

static void BM_LambdaSieve(benchmark::State& state) {
  for (auto _ : state) {
    LambdaSieve sieve(static_cast<std::uint64_t>(state.range(0)));
    benchmark::DoNotOptimize(sieve.entries().size());
  }
}
BENCHMARK(BM_LambdaSieve)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

static void BM_P4SquareSum(benchmark::State& state) {
  const long x = state.range(0);
  const PrecisionContext ctx(required_bits(static_cast<double>(x), 2.6));
  const KernelSpec spec(kernel::Rademacher{kernel::RademacherTerm::p4});
  for (auto _ : state) {
    benchmark::DoNotOptimize(alternating_sum(spec, QuadraticForm::squares(), x, ctx).abs_value);
  }
}
BENCHMARK(BM_P4SquareSum)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_BesselI1(benchmark::State& state) {
  const PrecisionContext ctx(static_cast<Bits>(state.range(0)));
  const Real z(250.5, ctx.working_bits());
  for (auto _ : state) benchmark::DoNotOptimize(bessel_i(1, z, ctx));
}
BENCHMARK(BM_BesselI1)->Arg(128)->Arg(512);

static void BM_ResidueCheck(benchmark::State& state) {
  const PrecisionContext ctx(192);
  const KernelSpec spec(kernel::ExpSqrt{Constant::pi_sqrt(mpq_class(2, 3))});
  for (auto _ : state) {
    benchmark::DoNotOptimize(residue_identity_check(spec, QuadraticForm::pentagonal(), 50, 1, ctx).rel_err);
  }
}
BENCHMARK(BM_ResidueCheck)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
