#include "fsketch/stream.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

#include "fsketch/error.hpp"

namespace fsketch {

Element parse_line(const std::string& line, std::size_t line_no) {
  std::string_view text(line);
  if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
  const auto tab = text.find('\t');
  if (tab == std::string_view::npos) return Element(std::string(text), 1.0);

  std::string_view field = text.substr(tab + 1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
  while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || end != field.data() + field.size()) {
    throw Error(ErrorKind::kLineError, "line " + std::to_string(line_no) + ": malformed value '" +
                                           std::string(field) + "'");
  }
  if (!valid_value(v)) {
    throw Error(ErrorKind::kLineError, "line " + std::to_string(line_no) + ": value must be positive, got '" +
                                           std::string(field) + "'");
  }
  return Element(std::string(text.substr(0, tab)), v);
}

bool TsvReader::next(Element& out) {
  while (std::getline(in_, buf_)) {
    ++line_;
    if (buf_.empty() || buf_ == "\r") continue;
    out = parse_line(buf_, line_);
    return true;
  }
  return false;
}

void for_each_element(const std::string& path, const std::function<void(const Element&)>& fn) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (path != "-") {
    file.open(path);
    if (!file) throw Error(ErrorKind::kInvalidParameter, "cannot open '" + path + "'");
    in = &file;
  }
  TsvReader reader(*in);
  Element e;
  while (reader.next(e)) fn(e);
}

std::vector<Element> read_elements(const std::string& path) {
  std::vector<Element> out;
  for_each_element(path, [&](const Element& e) { out.push_back(e); });
  return out;
}

void write_elements(std::ostream& out, const std::vector<Element>& elements) {
  for (const auto& e : elements) {
    out << e.key;
    if (e.val != 1.0) {
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof buf, e.val);
      out << '\t' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
}

ZipfGenerator::ZipfGenerator(double alpha, std::uint64_t seed) : am1_(alpha - 1.0), b_(0.0), rng_(seed) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw Error(ErrorKind::kInvalidParameter, "zipf alpha must be > 1");
  b_ = std::pow(2.0, am1_);
}

std::uint64_t ZipfGenerator::next() {
  constexpr double kMax = 9.0e18;
  for (;;) {
    const double u = rng_.uniform_open();
    const double v = rng_.uniform_open();
    const double x = std::floor(std::pow(u, -1.0 / am1_));
    if (!(x >= 1.0) || x > kMax) continue;
    const double t = std::pow(1.0 + 1.0 / x, am1_);
    if (v * x * (t - 1.0) / (b_ - 1.0) <= t / b_) return static_cast<std::uint64_t>(x);
  }
}

std::vector<Element> zipf_stream(double alpha, std::size_t n, std::uint64_t seed) {
  ZipfGenerator gen(alpha, seed);
  std::vector<Element> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(std::to_string(gen.next()), 1.0);
  return out;
}

}  // namespace fsketch
