#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "fsketch/error.hpp"

namespace fsketch {

// One unaggregated observation. Keys are opaque byte strings.
struct Element {
  std::string key;
  double val = 1.0;

  Element() = default;
  Element(std::string k, double v) : key(std::move(k)), val(v) {}

  friend bool operator==(const Element&, const Element&) = default;
};

inline bool valid_value(double v) noexcept { return std::isfinite(v) && v > 0.0; }

inline void require_valid(const Element& e) {
  if (!valid_value(e.val)) {
    throw Error(ErrorKind::kInvalidElement,
                "element value must be positive and finite (key '" + e.key + "')");
  }
}

}  // namespace fsketch
