#include <algorithm>
#include <fstream>
#include <string>

#include "osc/error.hpp"
#include "osc/primes.hpp"

namespace osc {

namespace {

constexpr char kMagic[4] = {'L', 'S', 'I', 'V'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put_le(std::ostream& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.put(static_cast<char>((value >> (8 * i)) & 0xff));
}

template <typename T>
bool get_le(std::istream& in, T& value) {
  value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    const int byte = in.get();
    if (byte == std::char_traits<char>::eof()) return false;
    value |= static_cast<T>(static_cast<unsigned char>(byte)) << (8 * i);
  }
  return true;
}

bool is_power_of(std::uint64_t value, std::uint64_t prime) {
  if (prime < 2) return false;
  while (value % prime == 0) value /= prime;
  return value == 1;
}

}  // namespace

void LambdaSieve::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot open " + path.string() + " for writing");
  out.write(kMagic, 4);
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint64_t>(out, limit_);
  for (const PrimePower& e : entries_) {
    put_le<std::uint64_t>(out, e.value);
    put_le<std::uint64_t>(out, e.prime);
  }
  if (!out) fail(ErrorKind::io, "write failed for " + path.string());
}

LambdaSieve LambdaSieve::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) {
    fail(ErrorKind::io, path.string() + " is not a sieve cache");
  }
  std::uint32_t version = 0;
  std::uint64_t limit = 0;
  if (!get_le(in, version) || version != kVersion) fail(ErrorKind::io, "unsupported sieve cache version");
  if (!get_le(in, limit)) fail(ErrorKind::io, "truncated sieve cache header");

  std::vector<PrimePower> entries;
  PrimePower e;
  while (get_le(in, e.value)) {
    if (!get_le(in, e.prime)) fail(ErrorKind::io, "truncated sieve cache record");
    if (e.value > limit || !is_power_of(e.value, e.prime) ||
        (!entries.empty() && entries.back().value >= e.value)) {
      fail(ErrorKind::io, "corrupt sieve cache record at value " + std::to_string(e.value));
    }
    entries.push_back(e);
  }
  return from_entries(limit, std::move(entries));
}

LambdaSieve LambdaSieve::cached(std::uint64_t limit, const std::filesystem::path& path) {
  if (std::filesystem::exists(path)) {
    LambdaSieve sieve = load(path);
    if (sieve.limit() >= limit) return sieve;
  }
  LambdaSieve sieve(limit);
  sieve.save(path);
  return sieve;
}

}  // namespace osc
