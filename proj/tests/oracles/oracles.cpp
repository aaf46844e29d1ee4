#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace oracle {

std::vector<mpz_class> partitions_dp(long n_max) {
  std::vector<mpz_class> p(static_cast<std::size_t>(n_max) + 1, 0);
  p[0] = 1;
  for (long part = 1; part <= n_max; ++part) {
    for (long total = part; total <= n_max; ++total) {
      p[static_cast<std::size_t>(total)] += p[static_cast<std::size_t>(total - part)];
    }
  }
  return p;
}

namespace {

long count_with_max_part(long n, long max_part) {
  if (n == 0) return 1;
  long total = 0;
  for (long part = std::min(n, max_part); part >= 1; --part) total += count_with_max_part(n - part, part);
  return total;
}

}  // namespace

long partitions_enumerated(long n) { return count_with_max_part(n, n); }

mpz_class f_r_direct(long M, long r) {
  mpz_class total = 0;
  for (long ell = -(2 * M - 1); ell <= 2 * M - 1; ++ell) {
    const mpz_class base = mpz_class(4 * M * M - ell * ell);
    mpz_class power;
    mpz_pow_ui(power.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(r));
    if (ell % 2 == 0) {
      total += power;
    } else {
      total -= power;
    }
  }
  return total;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t prime_power_base(std::uint64_t n) {
  if (n < 2) return 0;
  std::uint64_t p = n;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      p = d;
      break;
    }
  }
  std::uint64_t m = n;
  while (m % p == 0) m /= p;
  return m == 1 ? p : 0;
}

std::uint64_t prime_count(std::uint64_t n) {
  std::vector<std::uint64_t> small;
  std::uint64_t count = 0;
  for (std::uint64_t k = 2; k <= n; ++k) {
    bool prime = true;
    for (std::uint64_t p : small) {
      if (p * p > k) break;
      if (k % p == 0) {
        prime = false;
        break;
      }
    }
    if (!prime) continue;
    ++count;
    if (k * k <= n) small.push_back(k);
  }
  return count;
}

double psi_double(std::uint64_t y) {
  double total = 0;
  for (std::uint64_t n = 2; n <= y; ++n) {
    const std::uint64_t p = prime_power_base(n);
    if (p != 0) total += std::log(static_cast<double>(p));
  }
  return total;
}

osc::LogCombination psi_sum_per_ell(const mpq_class& x, const mpq_class& T, osc::Bits bits) {
  // L = max ℓ with ℓ² < xT.
  long L = 0;
  while (mpq_class((L + 1) * (L + 1)) < x * T) ++L;

  std::vector<std::uint64_t> tops;
  std::uint64_t highest = 0;
  for (long ell = 0; ell <= L; ++ell) {
    const osc::Real arg(mpq_class(x - mpq_class(ell * ell) / T), bits);
    const std::uint64_t top = osc::floor_to_integer(osc::exp(osc::sqrt(arg))).get_ui();
    tops.push_back(top);
    highest = std::max(highest, top);
  }
  std::vector<std::uint64_t> powers;
  std::vector<std::uint64_t> bases;
  for (std::uint64_t n = 2; n <= highest; ++n) {
    const std::uint64_t p = prime_power_base(n);
    if (p != 0) {
      powers.push_back(n);
      bases.push_back(p);
    }
  }
  // weight[i] = Σ_ℓ (-1)^ℓ over those ℓ whose Ψ includes powers[i].
  std::vector<long> weight(powers.size(), 0);
  for (long ell = -L; ell <= L; ++ell) {
    const std::uint64_t top = tops[static_cast<std::size_t>(std::abs(ell))];
    const long sign = ell % 2 == 0 ? 1 : -1;
    for (std::size_t i = 0; i < powers.size() && powers[i] <= top; ++i) weight[i] += sign;
  }
  osc::LogCombination out;
  for (std::size_t i = 0; i < powers.size(); ++i) out.add(bases[i], weight[i]);
  return out;
}

double bessel_series_double(int alpha, double z, int terms) {
  double total = 0;
  for (int m = 0; m < terms; ++m) {
    total += std::pow(z / 2, 2 * m + alpha) / (std::tgamma(m + 1.0) * std::tgamma(m + alpha + 1.0));
  }
  return total;
}

double delta_grid_argmax(double a, double c, double r_max, double step) {
  double best_r = 0;
  double best = 0;
  const auto count = static_cast<long>(r_max / step);
  for (long i = 0; i <= count; ++i) {
    const double r = static_cast<double>(i) * step;
    const double u = std::sqrt(a) * r;
    const double value = std::sqrt(u * (std::sqrt(u * u + 4) + u) / 2) - std::numbers::pi * r / c;
    if (value > best) {
      best = value;
      best_r = r;
    }
  }
  return best_r;
}

}  // namespace oracle
