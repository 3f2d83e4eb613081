#pragma once

#include <cstdint>
#include <string_view>

namespace fsketch {

/// Counter-based stream of 64-bit words (SplitMix64 over seed + counter).
///
/// The full state is the pair (seed, counter), so a source can be replayed by
/// reconstructing it, and independent sub-streams are derived in O(1) with
/// `stream(index)`. The sketches take draws from a RandomSource in element
/// order, which is what makes partition/merge replay tests possible.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed, std::uint64_t counter = 0) noexcept
      : seed_(seed), counter_(counter) {}

  /// Seeded from std::random_device.
  static RandomSource from_entropy();

  /// Independent source keyed by (this seed, index). Does not advance *this.
  RandomSource stream(std::uint64_t index) const noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform in the open interval (0, 1); never returns 0 or 1.
  double uniform_open() noexcept;

  /// Exp[rate] draw by inversion; rate must be positive (unchecked).
  double exponential(double rate) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

  friend bool operator==(const RandomSource&, const RandomSource&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

/// Maps 64 random bits to (0, 1), excluding both endpoints.
double bits_to_open_unit(std::uint64_t bits) noexcept;

/// -ln(u) / rate. Throws invalid-parameter unless rate > 0 and 0 < u < 1.
double exp_draw(double rate, double u);

/// Seeded key -> Exp[1] hash. h(z) is a pure function of (seed, z); the sketch
/// instances that are later merged must share the seed.
///
/// Backed by keyed SipHash-2-4 with 128-bit output
/// (libsodium `crypto_shorthash_siphashx24`); the first 64 output bits are
/// mapped to a (0,1) uniform u and the hash value is -ln(u).
class ExpHash {
 public:
  explicit ExpHash(std::uint64_t seed) noexcept;

  double operator()(std::string_view key) const noexcept;

  /// Hash of the structured key (primary, secondary), serialized as
  /// [u64 length of primary][primary bytes][u64 secondary], little-endian.
  double operator()(std::string_view primary, std::uint64_t secondary) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

  friend bool operator==(const ExpHash& a, const ExpHash& b) noexcept { return a.seed_ == b.seed_; }

 private:
  double from_bytes(const unsigned char* data, std::size_t len) const noexcept;

  std::uint64_t seed_;
  unsigned char key_[16];
};

/// Stable 64-bit keyed hash used to break ties between equal values in
/// bottom-k structures. Independent of any sketch seed.
std::uint64_t tie_hash(std::string_view key) noexcept;

}  // namespace fsketch
