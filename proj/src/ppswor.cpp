#include "fsketch/ppswor.hpp"

namespace fsketch {

void PpsworSketch::process(const Element& e, RandomSource& rng) {
  require_valid(e);
  sample_.process(e.key, rng.exponential(e.val));
}

}  // namespace fsketch
