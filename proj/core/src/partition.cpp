#include "osc/partition.hpp"

#include <string>

#include "osc/error.hpp"

namespace osc {

namespace {

// Σ_{j≠0} (-1)^{j+1} p(n - G_j) over the prefix values[0..n-1].
template <typename Values>
mpz_class euler_step(const Values& values, long n) {
  mpz_class acc = 0;
  for (long j = 1;; ++j) {
    const long g_pos = pentagonal(j);
    if (g_pos > n) break;
    const long g_neg = pentagonal(-j);
    if (j % 2 == 1) {
      acc += values[static_cast<std::size_t>(n - g_pos)];
      if (g_neg <= n) acc += values[static_cast<std::size_t>(n - g_neg)];
    } else {
      acc -= values[static_cast<std::size_t>(n - g_pos)];
      if (g_neg <= n) acc -= values[static_cast<std::size_t>(n - g_neg)];
    }
  }
  return acc;
}

template <typename Lookup>
mpz_class checksum_with(long x, Lookup&& lookup) {
  if (x < 1) fail(ErrorKind::domain, "pnt_checksum needs x >= 1");
  mpz_class acc = lookup(x);  // j = 0
  for (long j = 1;; ++j) {
    const long g_pos = pentagonal(j);
    if (g_pos > x) break;
    const long g_neg = pentagonal(-j);
    mpz_class pair = lookup(x - g_pos);
    if (g_neg <= x) pair += lookup(x - g_neg);
    if (j % 2 == 1) {
      acc -= pair;
    } else {
      acc += pair;
    }
  }
  return acc;
}

}  // namespace

ExactPartitionTable::ExactPartitionTable(long n_max) {
  values_.emplace_back(1);
  if (n_max > 0) extend_locked(n_max);
}

void ExactPartitionTable::extend_locked(long n_max) {
  for (long n = static_cast<long>(values_.size()); n <= n_max; ++n) {
    values_.push_back(euler_step(values_, n));
  }
}

void ExactPartitionTable::ensure(long n_max) {
  std::lock_guard lock(mutex_);
  extend_locked(n_max);
}

const mpz_class& ExactPartitionTable::at(long n) {
  if (n < 0) fail(ErrorKind::domain, "p(n) needs n >= 0, got " + std::to_string(n));
  std::lock_guard lock(mutex_);
  if (n >= static_cast<long>(values_.size())) extend_locked(n);
  return values_[static_cast<std::size_t>(n)];
}

long ExactPartitionTable::n_max() const {
  std::lock_guard lock(mutex_);
  return static_cast<long>(values_.size()) - 1;
}

std::vector<mpz_class> ExactPartitionTable::snapshot() const {
  std::lock_guard lock(mutex_);
  return {values_.begin(), values_.end()};
}

ExactPartitionTable& ExactPartitionTable::shared() {
  static ExactPartitionTable table;
  return table;
}

mpz_class partition_exact(long n) { return ExactPartitionTable::shared().at(n); }

mpz_class pnt_checksum(long x) { return pnt_checksum(x, ExactPartitionTable::shared()); }

mpz_class pnt_checksum(long x, ExactPartitionTable& table) {
  if (x >= 1) table.ensure(x);
  return checksum_with(x, [&](long k) -> const mpz_class& { return table.at(k); });
}

mpz_class pnt_checksum(long x, const std::vector<mpz_class>& values) {
  if (x >= static_cast<long>(values.size())) {
    fail(ErrorKind::out_of_range, "value list too short for x = " + std::to_string(x));
  }
  return checksum_with(x, [&](long k) -> const mpz_class& { return values[static_cast<std::size_t>(k)]; });
}

}  // namespace osc
