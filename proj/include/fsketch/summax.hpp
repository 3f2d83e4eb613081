#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "fsketch/bottom_k.hpp"
#include "fsketch/random.hpp"

namespace fsketch {

struct StructuredKey {
  std::string primary;
  std::uint64_t secondary = 0;
};

/// PPSWOR sample of primary keys by SUMMAX weight: the sum over secondary keys
/// of the maximum element value. An element ((p, s), v) is scored h((p, s)) / v
/// and the score is min-merged into a bottom-k keyed by p, so the stored seed
/// of p is Exp[SUMMAX(p)] distributed over the choice of hash seed.
class SumMaxSketch {
 public:
  SumMaxSketch(std::size_t k, ExpHash hash) : sample_(k), hash_(hash) {}

  /// Throws invalid-element unless val is positive and finite.
  bool process(const StructuredKey& key, double val);

  /// Applies a precomputed score h(key) / val for `primary`.
  bool process_score(const std::string& primary, double score) { return sample_.process(primary, score); }

  double score(const StructuredKey& key, double val) const { return hash_(key.primary, key.secondary) / val; }

  /// Throws incompatible-sketch unless capacity and hash seed agree.
  void merge(const SumMaxSketch& other);
  static SumMaxSketch merge(SumMaxSketch a, const SumMaxSketch& b) {
    a.merge(b);
    return a;
  }

  const BottomK& sample() const noexcept { return sample_; }
  BottomK& sample() noexcept { return sample_; }
  const ExpHash& hash() const noexcept { return hash_; }

 private:
  BottomK sample_;
  ExpHash hash_;
};

}  // namespace fsketch
