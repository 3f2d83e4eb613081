#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fsketch/bottom_k.hpp"
#include "fsketch/sampler.hpp"

namespace fsketch {

struct SampleParams {
  std::size_t k = 0;
  double eps = 0.0;
  std::uint32_t r = 0;
  std::string spec_name;
  friend bool operator==(const SampleParams&, const SampleParams&) = default;
};

struct SeedEntry {
  std::string key;
  double seed;
  friend bool operator==(const SeedEntry&, const SeedEntry&) = default;
};

/// Up to k keys with the lowest final seeds, ascending. When there are k of
/// them the k-th seed is the inclusion threshold tau and the first k-1 keys
/// are the sample; with fewer keys tau is +inf and every key is sampled.
struct FinalSample {
  std::vector<SeedEntry> entries;
  double tau = std::numeric_limits<double>::infinity();
  double gamma = std::numeric_limits<double>::infinity();
  SampleParams params;

  bool has_threshold() const noexcept { return tau < std::numeric_limits<double>::infinity(); }
  std::vector<SeedEntry> sampled() const;

  friend bool operator==(const FinalSample&, const FinalSample&) = default;
};

enum class Rescale { kMultiply, kDivide };

/// Applies value * factor (or / factor) to every entry. Throws
/// invalid-parameter unless factor is positive and finite.
BottomK seed_rescale(const BottomK& sample, double factor, Rescale mode);

/// Final sample of a sketch that has seen at least one element; the sketch
/// itself is left untouched. Throws empty-sample on an empty sketch.
FinalSample produce_sample(const SamplerSketch& sketch);

/// Wraps an ascending seed list (length <= k) the same way produce_sample does.
FinalSample make_final_sample(std::vector<BottomK::Entry> sorted, std::size_t k, double gamma, SampleParams params);

}  // namespace fsketch
