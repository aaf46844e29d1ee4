#pragma once

// Von Mangoldt sieve, Chebyshev Ψ and the alternating Ψ sums
//   S(x, T) = Σ_{ℓ² < xT} (-1)^ℓ Ψ(e^{√(x - ℓ²/T)}).

#include <gmpxx.h>

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <vector>

#include "osc/numerics.hpp"
#include "osc/oscsum.hpp"

namespace osc {

struct PrimePower {
  std::uint64_t value = 0;  // p^k
  std::uint64_t prime = 0;  // p, so Λ(value) = log p

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Σ_p coeff[p] log p, kept symbolic so two computations can be compared
/// exactly.
struct LogCombination {
  std::map<std::uint64_t, long> coeffs;

  void add(std::uint64_t prime, long count);
  Real evaluate(Bits bits) const;
  bool is_zero() const;
  LogCombination& operator+=(const LogCombination& rhs);
  LogCombination& operator-=(const LogCombination& rhs);

  friend bool operator==(const LogCombination& a, const LogCombination& b);
};

class LambdaSieve {
 public:
  static constexpr std::uint64_t kDefaultMemoryBudget = std::uint64_t{1} << 30;

  /// All prime powers <= limit. Resource error if the estimated footprint
  /// exceeds memory_budget bytes.
  explicit LambdaSieve(std::uint64_t limit, std::uint64_t memory_budget = kDefaultMemoryBudget);
  static LambdaSieve from_entries(std::uint64_t limit, std::vector<PrimePower> entries);

  LambdaSieve(LambdaSieve&&) noexcept;
  LambdaSieve& operator=(LambdaSieve&&) noexcept;
  ~LambdaSieve();

  std::uint64_t limit() const noexcept { return limit_; }
  /// Ascending by value.
  const std::vector<PrimePower>& entries() const noexcept { return entries_; }

  /// p if n = p^k, else 0.
  std::uint64_t lambda_prime(std::uint64_t n) const;
  bool is_prime_power(std::uint64_t n) const { return lambda_prime(n) != 0; }
  std::uint64_t prime_count(std::uint64_t y) const;

  /// Ψ(y) at ctx.working_bits(); checkpoints every 2^16 are cached per
  /// precision.
  Real psi(std::uint64_t y, const PrecisionContext& ctx) const;
  /// Ψ(⌊y⌋) for real y >= 0.
  Real psi(const Real& y, const PrecisionContext& ctx) const;
  LogCombination psi_exact(std::uint64_t y) const;

  /// "LSIV", u32 version, u64 limit, then (u64 value, u64 prime) pairs, all
  /// little-endian.
  void save(const std::filesystem::path& path) const;
  static LambdaSieve load(const std::filesystem::path& path);

  /// Loads `path` when it holds a sieve covering `limit`, otherwise builds one
  /// and writes it there.
  static LambdaSieve cached(std::uint64_t limit, const std::filesystem::path& path);

  static constexpr std::uint64_t kCheckpointStride = std::uint64_t{1} << 16;

 private:
  LambdaSieve() = default;
  struct Cache;

  std::uint64_t limit_ = 0;
  std::vector<PrimePower> entries_;
  std::unique_ptr<Cache> cache_;
};

struct PsiSum {
  SumReport report;
  /// The same value as an exact combination of logs.
  LogCombination exact;
  /// Largest ℓ >= 0 with ℓ² < xT.
  long ell_max = 0;
};

/// ℓ_max = max ℓ >= 0 with ℓ² < xT.
long psi_ell_max(const mpq_class& x, const mpq_class& T);

/// Largest ℓ in [0, ell_max] with log² n <= x - ℓ²/T, or -1 when n > e^{√x}.
long psi_threshold(std::uint64_t n, const mpq_class& x, const mpq_class& T, long ell_max, Bits bits);

/// Single pass over the sieve: n contributes Λ(n)·(-1)^{ℓ*(n)}.
PsiSum psi_weak_pentagonal(const mpq_class& x, const mpq_class& T, const LambdaSieve& sieve,
                           const PrecisionContext& ctx);

struct PsiHalf {
  Real lhs;  // Σ_{1 <= ℓ, 2ℓ <= ℓ_max} Ψ((e_{2ℓ}, e_{2ℓ-1}])
  Real rhs;  // Ψ(e^{√x}) / 2
  Real rel_err;
  Real complement;       // Σ over the intervals (e_{2ℓ+1}, e_{2ℓ}], 2ℓ < ℓ_max
  Real psi_top;          // Ψ(e^{√x})
  Real psi_tail;         // Ψ(e_{ℓ_max})
  Real boundary_term;    // Ψ(e_{ℓ_max}) when ℓ_max is odd, else 0
  Real alternating_sum;  // S(x, T)
  Real measure_fraction; // total length of the lhs intervals / e^{√x}
  long ell_max = 0;
  LogCombination lhs_exact;
  LogCombination complement_exact;
  LogCombination tail_exact;
};

/// Interval-half sum with e_ℓ = e^{√(x - ℓ²/T)}. The ℓ = 0 interval has
/// reversed endpoints and contributes nothing; intervals are half-open on the
/// left so that lhs + complement = Ψ(e_0) - Ψ(e_{ℓ_max}) exactly.
PsiHalf psi_interval_half(const mpq_class& x, const mpq_class& T, const LambdaSieve& sieve,
                          const PrecisionContext& ctx);

}  // namespace osc
