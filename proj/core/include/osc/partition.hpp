#pragma once

// Exact partition numbers and the truncated asymptotic kernels summed by the
// oscillating-sum experiments.

#include <gmpxx.h>

#include <cstddef>
#include <deque>
#include <filesystem>
#include <mutex>
#include <vector>

#include "osc/constant.hpp"
#include "osc/numerics.hpp"

namespace osc {

/// p(0..n_max) from Euler's pentagonal recurrence. Grows on demand; computed
/// prefixes never move, so references returned by at() stay valid.
class ExactPartitionTable {
 public:
  explicit ExactPartitionTable(long n_max = 0);

  ExactPartitionTable(const ExactPartitionTable&) = delete;
  ExactPartitionTable& operator=(const ExactPartitionTable&) = delete;

  /// p(n); extends the table through n first if needed.
  const mpz_class& at(long n);
  void ensure(long n_max);
  long n_max() const;

  /// Copy of p(0..n_max()).
  std::vector<mpz_class> snapshot() const;

  /// Binary cache: "PTAB", u32 version, u64 n_max, then per value a u32 byte
  /// count and little-endian magnitude bytes.
  void save(const std::filesystem::path& path) const;
  /// Loads and re-checks every value against the recurrence.
  static std::vector<mpz_class> load(const std::filesystem::path& path);

  /// Process-wide table used by partition_exact().
  static ExactPartitionTable& shared();

 private:
  void extend_locked(long n_max);

  mutable std::mutex mutex_;
  std::deque<mpz_class> values_;
};

/// Generalised pentagonal number G_j = j(3j-1)/2, j of either sign.
inline long pentagonal(long j) { return j * (3 * j - 1) / 2; }

mpz_class partition_exact(long n);

/// Σ over j ∈ ℤ with G_j <= x of (-1)^j p(x - G_j). Zero for every x >= 1.
mpz_class pnt_checksum(long x);
mpz_class pnt_checksum(long x, ExactPartitionTable& table);
/// Same sum over an explicit value list (lets tests inject corrupted tables).
mpz_class pnt_checksum(long x, const std::vector<mpz_class>& values);

// Hardy-Ramanujan-Rademacher truncations. Results carry ctx.working_bits().

/// e^{π√(2x/3)} / (4√3 x).
Real p1(const Real& x, const PrecisionContext& ctx);
/// (√12/(24x-1) - 6√12/(π(24x-1)^{3/2})) e^{(π/6)√(24x-1)}; needs 24x > 1.
Real p2(const Real& x, const PrecisionContext& ctx);
/// (-1)^x (√6/(24x-1) - 12√6/(π(24x-1)^{3/2})) e^{(π/12)√(24x-1)}.
Real p3(long x, const PrecisionContext& ctx);
/// p2 + p3, integer x only.
Real p4(long x, const PrecisionContext& ctx);

/// d/dn I₀(π√((n+1/24)/3)) = π/(2√3 √(n+1/24)) · I₁(π√((n+1/24)/3)).
Real q1_kernel(const Real& n, const PrecisionContext& ctx);

struct Mod5Constants {
  mpq_class shift{1};  // A in 60n - A
  mpq_class scale{1};  // B
};

/// B·csc(πa/5)·(60n - A)^{-3/8}·e^{(π/15)√(60n - A)}, a in 1..4.
Real p5_kernel(const Real& n, int a, const PrecisionContext& ctx, const Mod5Constants& constants = {});

/// Ratio of two polynomials with exact constant coefficients, lowest degree
/// first.
struct RationalFunction {
  std::vector<Constant> numerator{Constant(1)};
  std::vector<Constant> denominator{Constant(1)};

  Real operator()(const Real& n, Bits bits) const;
};

struct MeinardusParams {
  mpq_class q_exp{1};
  mpq_class theta{1, 2};
  mpq_class r_exp{1, 2};
  mpq_class s_exp{1, 2};
  RationalFunction g;
  RationalFunction h;
  RationalFunction k;

  /// Throws invalid_parameters unless θ, r, q > 0 and 0 < s < 1.
  void validate() const;

  /// g = √12/(24n-1), h = k = (π²/36)(24n-1), θ = r = s = 1/2, q = 1:
  /// the kernel coincides with p2.
  static MeinardusParams usual_partitions();
};

/// g(n)^q · e^{k(n)^θ} · (1 - h(n)^{-r}); domain error if g, h or k <= 0.
Real meinardus_kernel(const MeinardusParams& params, const Real& n, const PrecisionContext& ctx);

}  // namespace osc
