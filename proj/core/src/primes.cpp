#include "osc/primes.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "osc/error.hpp"

namespace osc {

struct LambdaSieve::Cache {
  std::mutex mutex;
  std::map<Bits, std::vector<Real>> checkpoints;
};

void LogCombination::add(std::uint64_t prime, long count) {
  if (count == 0) return;
  auto [it, inserted] = coeffs.try_emplace(prime, count);
  if (!inserted) {
    it->second += count;
    if (it->second == 0) coeffs.erase(it);
  }
}

Real LogCombination::evaluate(Bits bits) const {
  Real acc(0L, bits);
  for (const auto& [prime, count] : coeffs) {
    acc += log(Real(mpz_class(static_cast<unsigned long>(prime)), bits)) * count;
  }
  return acc;
}

bool LogCombination::is_zero() const { return coeffs.empty(); }

LogCombination& LogCombination::operator+=(const LogCombination& rhs) {
  for (const auto& [prime, count] : rhs.coeffs) add(prime, count);
  return *this;
}

LogCombination& LogCombination::operator-=(const LogCombination& rhs) {
  for (const auto& [prime, count] : rhs.coeffs) add(prime, -count);
  return *this;
}

bool operator==(const LogCombination& a, const LogCombination& b) { return a.coeffs == b.coeffs; }

LambdaSieve::LambdaSieve(std::uint64_t limit, std::uint64_t memory_budget) : limit_(limit) {
  if (limit < 2) fail(ErrorKind::invalid_parameters, "sieve limit must be >= 2");
  // Marking bits plus a generous 16 bytes per expected prime power.
  const double expected_entries = 1.3 * static_cast<double>(limit) / std::max(1.0, std::log(static_cast<double>(limit)));
  const double footprint = static_cast<double>(limit) / 8 + 16 * expected_entries;
  if (footprint > static_cast<double>(memory_budget)) {
    fail(ErrorKind::resource, "sieve to " + std::to_string(limit) + " exceeds the memory budget of " +
                                  std::to_string(memory_budget) + " bytes");
  }

  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t p = 2; p * p <= limit; ++p) {
    if (composite[p]) continue;
    for (std::uint64_t m = p * p; m <= limit; m += p) composite[m] = true;
  }
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    std::uint64_t power = p;
    while (true) {
      entries_.push_back({power, p});
      if (power > limit / p) break;
      power *= p;
    }
  }
  std::sort(entries_.begin(), entries_.end(), [](const PrimePower& a, const PrimePower& b) { return a.value < b.value; });
  cache_ = std::make_unique<Cache>();
}

LambdaSieve LambdaSieve::from_entries(std::uint64_t limit, std::vector<PrimePower> entries) {
  LambdaSieve sieve;
  sieve.limit_ = limit;
  sieve.entries_ = std::move(entries);
  sieve.cache_ = std::make_unique<Cache>();
  return sieve;
}

LambdaSieve::LambdaSieve(LambdaSieve&&) noexcept = default;
LambdaSieve& LambdaSieve::operator=(LambdaSieve&&) noexcept = default;
LambdaSieve::~LambdaSieve() = default;

std::uint64_t LambdaSieve::lambda_prime(std::uint64_t n) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                             [](const PrimePower& e, std::uint64_t v) { return e.value < v; });
  return it != entries_.end() && it->value == n ? it->prime : 0;
}

std::uint64_t LambdaSieve::prime_count(std::uint64_t y) const {
  if (y > limit_) fail(ErrorKind::out_of_range, "prime count beyond sieve limit");
  return static_cast<std::uint64_t>(std::count_if(entries_.begin(), entries_.end(), [y](const PrimePower& e) {
    return e.value <= y && e.value == e.prime;
  }));
}

Real LambdaSieve::psi(std::uint64_t y, const PrecisionContext& ctx) const {
  if (y > limit_) {
    fail(ErrorKind::out_of_range, "psi(" + std::to_string(y) + ") beyond sieve limit " + std::to_string(limit_));
  }
  const Bits bits = ctx.working_bits();
  const std::uint64_t slot = y / kCheckpointStride;
  Real acc(bits);
  {
    std::lock_guard lock(cache_->mutex);
    auto& table = cache_->checkpoints[bits];
    if (table.empty()) {
      const std::uint64_t slots = limit_ / kCheckpointStride + 1;
      table.reserve(slots);
      Real running(0L, bits);
      auto it = entries_.begin();
      for (std::uint64_t k = 0; k < slots; ++k) {
        const std::uint64_t edge = k * kCheckpointStride;
        for (; it != entries_.end() && it->value <= edge; ++it) {
          running += log(Real(static_cast<long>(it->prime), bits));
        }
        table.push_back(running);
      }
    }
    acc = table[slot];
  }
  const std::uint64_t from = slot * kCheckpointStride;
  auto it = std::upper_bound(entries_.begin(), entries_.end(), from,
                             [](std::uint64_t v, const PrimePower& e) { return v < e.value; });
  for (; it != entries_.end() && it->value <= y; ++it) acc += log(Real(static_cast<long>(it->prime), bits));
  return acc;
}

Real LambdaSieve::psi(const Real& y, const PrecisionContext& ctx) const {
  if (y.sign() < 0) fail(ErrorKind::domain, "psi needs y >= 0");
  const mpz_class floor_y = floor_to_integer(y);
  if (!floor_y.fits_ulong_p() || floor_y.get_ui() > limit_) {
    fail(ErrorKind::out_of_range, "psi(" + y.to_string(12) + ") beyond sieve limit " + std::to_string(limit_));
  }
  return psi(static_cast<std::uint64_t>(floor_y.get_ui()), ctx);
}

LogCombination LambdaSieve::psi_exact(std::uint64_t y) const {
  if (y > limit_) fail(ErrorKind::out_of_range, "psi beyond sieve limit");
  LogCombination out;
  for (const PrimePower& e : entries_) {
    if (e.value > y) break;
    out.add(e.prime, 1);
  }
  return out;
}

long psi_ell_max(const mpq_class& x, const mpq_class& T) {
  if (x <= 0 || T <= 0) fail(ErrorKind::invalid_parameters, "psi sums need x > 0 and T > 0");
  const mpq_class bound = x * T;
  mpz_class root;
  mpz_class whole = bound.get_num() / bound.get_den();
  mpz_sqrt(root.get_mpz_t(), whole.get_mpz_t());
  while (mpq_class(root * root) >= bound) --root;
  while (mpq_class((root + 1) * (root + 1)) < bound) ++root;
  if (!root.fits_slong_p()) fail(ErrorKind::out_of_range, "x T too large");
  return root.get_si();
}

long psi_threshold(std::uint64_t n, const mpq_class& x, const mpq_class& T, long ell_max, Bits bits) {
  if (n <= 1) return ell_max;
  const Real log_n = log(Real(static_cast<long>(n), bits));
  const Real rem = Real(x, bits) - square(log_n);
  if (rem.sign() < 0) return -1;
  const Real T_real(T, bits);
  auto fits = [&](long ell) { return Real(mpz_class(mpz_class(ell) * ell), bits) / T_real <= rem; };
  const mpz_class estimate = floor_to_integer(sqrt(T_real * rem));
  long ell = estimate.fits_slong_p() ? std::min(estimate.get_si(), ell_max) : ell_max;
  while (ell < ell_max && fits(ell + 1)) ++ell;
  while (ell > 0 && !fits(ell)) --ell;
  return ell;
}

namespace {

// Checks e^{√x} <= sieve limit and returns ⌊e^{√x}⌋.
std::uint64_t top_of_range(const mpq_class& x, const LambdaSieve& sieve, Bits bits) {
  const mpz_class top = floor_to_integer(exp(sqrt(Real(x, bits))));
  if (!top.fits_ulong_p() || top.get_ui() > sieve.limit()) {
    fail(ErrorKind::out_of_range, "e^sqrt(x) = " + top.get_str() + " exceeds sieve limit " +
                                      std::to_string(sieve.limit()));
  }
  return top.get_ui();
}

void check_psi_precision(const mpq_class& x, const PrecisionContext& ctx) {
  const Bits needed = required_bits(x.get_d(), 1.0);
  if (needed > ctx.bits) {
    fail(ErrorKind::precision_insufficient,
         "psi sum at x = " + to_string(x) + " needs " + std::to_string(needed) + " bits");
  }
}

}  // namespace

PsiSum psi_weak_pentagonal(const mpq_class& x, const mpq_class& T, const LambdaSieve& sieve,
                           const PrecisionContext& ctx) {
  const long ell_max = psi_ell_max(x, T);
  check_psi_precision(x, ctx);
  const Bits bits = ctx.working_bits();
  const std::uint64_t top = top_of_range(x, sieve, bits);

  PsiSum out;
  out.ell_max = ell_max;
  for (const PrimePower& e : sieve.entries()) {
    if (e.value > top) break;
    const long ell = psi_threshold(e.value, x, T, ell_max, bits);
    if (ell < 0) continue;
    // Σ_{|ℓ| <= ell} (-1)^ℓ = (-1)^ell.
    out.exact.add(e.prime, ell % 2 == 0 ? 1 : -1);
  }
  Real value = out.exact.evaluate(bits);
  out.report.x = x;
  out.report.abs_value = abs(value);
  out.report.value = Complex(value);
  out.report.term_count = 2 * ell_max + 1;
  out.report.precision_bits = ctx.bits;
  return out;
}

PsiHalf psi_interval_half(const mpq_class& x, const mpq_class& T, const LambdaSieve& sieve,
                          const PrecisionContext& ctx) {
  const long ell_max = psi_ell_max(x, T);
  check_psi_precision(x, ctx);
  const Bits bits = ctx.working_bits();
  const std::uint64_t top = top_of_range(x, sieve, bits);

  PsiHalf out;
  out.ell_max = ell_max;
  LogCombination alternating;
  for (const PrimePower& e : sieve.entries()) {
    if (e.value > top) break;
    const long ell = psi_threshold(e.value, x, T, ell_max, bits);
    if (ell < 0) continue;
    alternating.add(e.prime, ell % 2 == 0 ? 1 : -1);
    if (ell == ell_max) {
      out.tail_exact.add(e.prime, 1);
    } else if (ell % 2 == 1) {
      // e_{ell+1} < n <= e_{ell}: the interval (e_{2j}, e_{2j-1}] with 2j = ell + 1.
      out.lhs_exact.add(e.prime, 1);
    } else {
      out.complement_exact.add(e.prime, 1);
    }
  }

  out.lhs = out.lhs_exact.evaluate(bits);
  out.complement = out.complement_exact.evaluate(bits);
  out.psi_tail = out.tail_exact.evaluate(bits);
  out.psi_top = out.lhs + out.complement + out.psi_tail;
  out.rhs = out.psi_top / 2L;
  out.rel_err = out.psi_top.is_zero() ? Real(0L, bits) : abs(out.lhs - out.rhs) / out.psi_top;
  out.boundary_term = ell_max % 2 == 1 ? out.psi_tail : Real(0L, bits);
  out.alternating_sum = alternating.evaluate(bits);

  const Real x_real(x, bits);
  const Real T_real(T, bits);
  auto edge = [&](long ell) { return exp(sqrt(x_real - Real(mpz_class(mpz_class(ell) * ell), bits) / T_real)); };
  Real length(0L, bits);
  for (long j = 1; 2 * j <= ell_max; ++j) length += edge(2 * j - 1) - edge(2 * j);
  out.measure_fraction = length / edge(0);
  return out;
}

}  // namespace osc
