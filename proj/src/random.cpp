#include "fsketch/random.hpp"

#include <sodium.h>

#include <cmath>
#include <cstring>
#include <random>
#include <string>

#include "fsketch/error.hpp"

namespace fsketch {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

void ensure_sodium() noexcept {
  static const int once = sodium_init();
  (void)once;
}

void store_le64(unsigned char* out, std::uint64_t v) noexcept {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(v >> (8 * i));
}

std::uint64_t load_le64(const unsigned char* in) noexcept {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[i]) << (8 * i);
  return v;
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double bits_to_open_unit(std::uint64_t bits) noexcept {
  // 52 bits shifted by half a step: (0.5 .. 2^52 - 0.5) * 2^-52, all exact.
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

RandomSource RandomSource::from_entropy() {
  std::random_device rd;
  const std::uint64_t hi = rd();
  const std::uint64_t lo = rd();
  return RandomSource((hi << 32) ^ lo);
}

RandomSource RandomSource::stream(std::uint64_t index) const noexcept {
  return RandomSource(mix64(seed_ ^ mix64(index + kGolden)) + index);
}

std::uint64_t RandomSource::next_u64() noexcept {
  ++counter_;
  return mix64(seed_ + counter_ * kGolden);
}

double RandomSource::uniform_open() noexcept { return bits_to_open_unit(next_u64()); }

double RandomSource::exponential(double rate) noexcept { return -std::log(uniform_open()) / rate; }

double exp_draw(double rate, double u) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorKind::kInvalidParameter, "exponential rate must be positive");
  }
  if (!(u > 0.0 && u < 1.0)) {
    throw Error(ErrorKind::kInvalidParameter, "uniform variate must lie in (0, 1)");
  }
  return -std::log(u) / rate;
}

ExpHash::ExpHash(std::uint64_t seed) noexcept : seed_(seed) {
  ensure_sodium();
  store_le64(key_, mix64(seed + kGolden));
  store_le64(key_ + 8, mix64(seed + 2 * kGolden));
}

double ExpHash::from_bytes(const unsigned char* data, std::size_t len) const noexcept {
  unsigned char out[crypto_shorthash_siphashx24_BYTES];
  crypto_shorthash_siphashx24(out, data, len, key_);
  return -std::log(bits_to_open_unit(load_le64(out)));
}

double ExpHash::operator()(std::string_view key) const noexcept {
  return from_bytes(reinterpret_cast<const unsigned char*>(key.data()), key.size());
}

double ExpHash::operator()(std::string_view primary, std::uint64_t secondary) const noexcept {
  unsigned char small[64];
  std::string large;
  const std::size_t len = primary.size() + 16;
  unsigned char* buf = small;
  if (len > sizeof(small)) {
    large.resize(len);
    buf = reinterpret_cast<unsigned char*>(large.data());
  }
  store_le64(buf, primary.size());
  if (!primary.empty()) std::memcpy(buf + 8, primary.data(), primary.size());
  store_le64(buf + 8 + primary.size(), secondary);
  return from_bytes(buf, len);
}

std::uint64_t tie_hash(std::string_view key) noexcept {
  ensure_sodium();
  static const unsigned char kTieKey[crypto_shorthash_siphash24_KEYBYTES] = {
      0x74, 0x69, 0x65, 0x2d, 0x62, 0x72, 0x65, 0x61,
      0x6b, 0x2d, 0x62, 0x6f, 0x74, 0x74, 0x6f, 0x6d};
  unsigned char out[crypto_shorthash_siphash24_BYTES];
  crypto_shorthash_siphash24(out, reinterpret_cast<const unsigned char*>(key.data()), key.size(),
                             kTieKey);
  return load_le64(out);
}

}  // namespace fsketch
