#pragma once

#include <cstddef>

#include "fsketch/bottom_k.hpp"
#include "fsketch/element.hpp"
#include "fsketch/random.hpp"

namespace fsketch {

// PPSWOR sample by frequency over unaggregated elements: each element gets an
// Exp[val] score and the bottom-k structure keeps per key the minimum, which
// is Exp[nu_x] distributed.
class PpsworSketch {
 public:
  PpsworSketch(std::size_t k, RandomSource rng) : sample_(k), rng_(rng) {}

  void process(const Element& e) { process(e, rng_); }
  // Draws from `rng` instead of the sketch's own source (replay).
  void process(const Element& e, RandomSource& rng);

  // Throws incompatible-sketch on capacity mismatch.
  void merge(const PpsworSketch& other) { sample_.merge(other.sample_); }
  static PpsworSketch merge(PpsworSketch a, const PpsworSketch& b) {
    a.merge(b);
    return a;
  }

  const BottomK& sample() const noexcept { return sample_; }
  BottomK& sample() noexcept { return sample_; }
  const RandomSource& rng() const noexcept { return rng_; }
  std::size_t capacity() const noexcept { return sample_.capacity(); }

 private:
  BottomK sample_;
  RandomSource rng_;
};

}  // namespace fsketch
