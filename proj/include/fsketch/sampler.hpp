#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "fsketch/element.hpp"
#include "fsketch/ppswor.hpp"
#include "fsketch/random.hpp"
#include "fsketch/sideline.hpp"
#include "fsketch/summax.hpp"
#include "fsketch/transforms.hpp"

namespace fsketch {

struct SketchOptions {
  // Drop sideline entries that could no longer change the SumMax sample.
  bool prune_sideline = true;
  // Drop PPSWOR entries whose rescaled seed can no longer reach the final sample.
  bool truncate_ppswor = true;
  friend bool operator==(const SketchOptions&, const SketchOptions&) = default;
};

struct SketchSize {
  std::size_t distinct_keys = 0;
  std::size_t stored_elements = 0;
  friend bool operator==(const SketchSize&, const SketchSize&) = default;
};

/// Composable sample of keys weighted by f(frequency) for a soft concave
/// sublinear f. The lower range of the transform is covered by a PPSWOR
/// sub-sketch over the raw elements; the upper range by r replicas per
/// element whose Exp[val] draws wait in the sideline until they reach gamma,
/// and then enter a SumMax sub-sketch with value A(draw).
class SamplerSketch {
 public:
  /// Throws invalid-parameter unless k >= 3 and 0 < eps <= 1/2.
  SamplerSketch(std::size_t k, double eps, FunctionSpec spec, RandomSource rng, ExpHash hash,
                SketchOptions options = {});
  SamplerSketch(std::size_t k, double eps, FunctionSpec spec, std::uint64_t seed, SketchOptions options = {});

  SamplerSketch(const SamplerSketch& other);
  SamplerSketch& operator=(const SamplerSketch& other);
  SamplerSketch(SamplerSketch&&) noexcept;
  SamplerSketch& operator=(SamplerSketch&&) noexcept;
  ~SamplerSketch();

  void process(const Element& e) { process(e, rng_); }
  /// Takes the element's draws from `rng` (replay across partitions).
  void process(const Element& e, RandomSource& rng);

  /// Throws incompatible-sketch unless k, eps, spec, hash seed and options agree.
  void merge(const SamplerSketch& other);
  static SamplerSketch merge(SamplerSketch a, const SamplerSketch& b) {
    a.merge(b);
    return a;
  }

  SketchSize size() const;

  std::size_t k() const noexcept { return k_; }
  double eps() const noexcept { return eps_; }
  std::uint32_t r() const noexcept { return r_; }
  const FunctionSpec& spec() const noexcept { return spec_; }
  const SketchOptions& options() const noexcept { return options_; }
  double sum() const noexcept { return sum_; }
  double gamma() const noexcept { return gamma_; }
  bool empty() const noexcept { return sum_ == 0.0; }

  const PpsworSketch& ppswor() const noexcept { return ppswor_; }
  const SumMaxSketch& summax() const noexcept { return summax_; }
  const Sideline& sideline() const noexcept { return sideline_; }
  const RandomSource& rng() const noexcept { return rng_; }
  const ExpHash& hash() const noexcept { return summax_.hash(); }

  /// Monotone counter of structural changes; equal versions imply equal size().
  std::uint64_t version() const noexcept { return version_; }

  /// Rebuilds a sketch from serialized parts, re-applying the invariants.
  static SamplerSketch restore(std::size_t k, double eps, FunctionSpec spec, RandomSource rng, ExpHash hash,
                               SketchOptions options, double sum, const std::vector<BottomK::Entry>& ppswor,
                               const std::vector<BottomK::Entry>& summax,
                               const std::vector<Sideline::Item>& sideline);

  /// Same parameters and the same contents of all three sub-structures.
  friend bool operator==(const SamplerSketch& a, const SamplerSketch& b);

 private:
  class HashMemo;

  void check_compatible(const SamplerSketch& other) const;
  void replicate(const Element& e, RandomSource& rng);
  void flush();
  void optimize();
  double sideline_score(const std::string& key, std::uint32_t replica, double y);

  std::size_t k_;
  double eps_;
  std::uint32_t r_;
  FunctionSpec spec_;
  SketchOptions options_;
  PpsworSketch ppswor_;
  SumMaxSketch summax_;
  Sideline sideline_;
  RandomSource rng_;
  double sum_ = 0.0;
  double gamma_ = std::numeric_limits<double>::infinity();

  // PPSWOR seeds at or above this bound are dropped by truncation.
  double ppswor_bound_ = std::numeric_limits<double>::infinity();
  bool summax_dirty_ = false;
  std::uint64_t version_ = 0;
  mutable std::uint64_t size_version_ = ~std::uint64_t{0};
  mutable SketchSize size_cache_;
  std::unique_ptr<HashMemo> memo_;
};

/// r = ceil(k / eps); exact quotients are not rounded up.
std::uint32_t replica_count(std::size_t k, double eps);

}  // namespace fsketch
