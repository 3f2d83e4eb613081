#include "fsketch/summax.hpp"

#include "fsketch/element.hpp"
#include "fsketch/error.hpp"

namespace fsketch {

bool SumMaxSketch::process(const StructuredKey& key, double val) {
  if (!valid_value(val)) {
    throw Error(ErrorKind::kInvalidElement, "summax element value must be positive and finite");
  }
  return sample_.process(key.primary, score(key, val));
}

void SumMaxSketch::merge(const SumMaxSketch& other) {
  if (!(hash_ == other.hash_)) {
    throw Error(ErrorKind::kIncompatibleSketch, "summax sketches were built with different hash seeds");
  }
  sample_.merge(other.sample_);
}

}  // namespace fsketch
