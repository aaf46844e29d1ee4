#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>

#include "osc/error.hpp"
#include "osc/partition.hpp"

namespace osc {

namespace {

constexpr char kMagic[4] = {'P', 'T', 'A', 'B'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put_le(std::ostream& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.put(static_cast<char>((value >> (8 * i)) & 0xff));
  }
}

template <typename T>
T get_le(std::istream& in) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    const int byte = in.get();
    if (byte == std::char_traits<char>::eof()) fail(ErrorKind::io, "truncated partition table");
    value |= static_cast<T>(static_cast<unsigned char>(byte)) << (8 * i);
  }
  return value;
}

}  // namespace

void ExactPartitionTable::save(const std::filesystem::path& path) const {
  const std::vector<mpz_class> values = snapshot();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot open " + path.string() + " for writing");
  out.write(kMagic, 4);
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint64_t>(out, values.size() - 1);
  std::vector<unsigned char> bytes;
  for (const mpz_class& v : values) {
    const std::size_t size = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
    bytes.assign(size, 0);
    std::size_t written = 0;
    mpz_export(bytes.data(), &written, -1, 1, 0, 0, v.get_mpz_t());
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(written));
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(written));
  }
  if (!out) fail(ErrorKind::io, "write failed for " + path.string());
}

std::vector<mpz_class> ExactPartitionTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) {
    fail(ErrorKind::io, path.string() + " is not a partition table");
  }
  if (get_le<std::uint32_t>(in) != kVersion) fail(ErrorKind::io, "unsupported partition table version");
  const std::uint64_t n_max = get_le<std::uint64_t>(in);
  std::vector<mpz_class> values;
  values.reserve(n_max + 1);
  std::vector<unsigned char> bytes;
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    const std::uint32_t size = get_le<std::uint32_t>(in);
    bytes.resize(size);
    if (size > 0 && !in.read(reinterpret_cast<char*>(bytes.data()), size)) {
      fail(ErrorKind::io, "truncated partition table");
    }
    mpz_class v;
    mpz_import(v.get_mpz_t(), size, -1, 1, 0, 0, bytes.data());
    values.push_back(std::move(v));
  }
  ExactPartitionTable check(static_cast<long>(n_max));
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    if (values[n] != check.at(static_cast<long>(n))) {
      fail(ErrorKind::io, "partition table entry " + std::to_string(n) + " is corrupt");
    }
  }
  return values;
}

}  // namespace osc
