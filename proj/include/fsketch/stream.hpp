#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "fsketch/element.hpp"
#include "fsketch/random.hpp"

namespace fsketch {

/// Reads `key<TAB>value` lines; a line without a tab is the key with value 1.
/// Blank lines are skipped. A malformed or non-positive value throws
/// line-error naming the line number.
class TsvReader {
 public:
  explicit TsvReader(std::istream& in) : in_(in) {}
  bool next(Element& out);
  std::size_t line() const noexcept { return line_; }

 private:
  std::istream& in_;
  std::string buf_;
  std::size_t line_ = 0;
};

Element parse_line(const std::string& line, std::size_t line_no);

/// Streams a TSV file ("-" is stdin) through fn.
void for_each_element(const std::string& path, const std::function<void(const Element&)>& fn);
std::vector<Element> read_elements(const std::string& path);
void write_elements(std::ostream& out, const std::vector<Element>& elements);

/// Zipf(alpha) integers >= 1 by rejection (Devroye's method, as in numpy).
class ZipfGenerator {
 public:
  /// Throws invalid-parameter unless alpha > 1.
  ZipfGenerator(double alpha, std::uint64_t seed);
  std::uint64_t next();

 private:
  double am1_;
  double b_;
  RandomSource rng_;
};

/// n unit-value elements with decimal Zipf keys.
std::vector<Element> zipf_stream(double alpha, std::size_t n, std::uint64_t seed);

}  // namespace fsketch
