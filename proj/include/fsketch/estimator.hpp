#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fsketch/element.hpp"
#include "fsketch/final_sample.hpp"
#include "fsketch/transforms.hpp"

namespace fsketch {

/// Pr[seed < t] for a key of frequency w in a sample produced with (gamma, r):
/// 1 - p1 * p2^r with p1 = exp(-w B(gamma) t) and
/// p2 = E_y[exp(-A(max(y, gamma)) t / r)], y ~ Exp[w].
/// Throws numeric-failure if the tail quadrature does not converge.
double seed_cdf(double w, double t, const FunctionSpec& spec, double gamma, std::uint32_t r);

/// f(nu) / Pr[seed < tau]; f(nu) when tau is +inf.
double per_key_estimate(double nu, double tau, const FunctionSpec& spec, double gamma, std::uint32_t r);

/// Second pass: sums the values of elements whose key is a target.
class FreqCollector {
 public:
  FreqCollector() = default;
  explicit FreqCollector(const std::vector<std::string>& targets);
  explicit FreqCollector(const FinalSample& sample);

  void process(const Element& e);
  /// Pointwise sum; targets become the union.
  void merge(const FreqCollector& other);

  bool is_target(const std::string& key) const { return sums_.count(key) != 0; }
  /// nullopt for non-targets; 0 for targets never seen.
  std::optional<double> frequency(const std::string& key) const;
  const std::unordered_map<std::string, double>& sums() const noexcept { return sums_; }

 private:
  std::unordered_map<std::string, double> sums_;
};

struct Estimate {
  double value = 0.0;
  std::map<std::string, double> per_key;
};

using KeyWeights = std::function<double(const std::string&)>;

/// Sum over sampled keys of L(x) * f-hat(x). Keys with L(x) = 0 are skipped.
/// Throws incompatible-sketch when the spec does not match the sample, and
/// incomplete-second-pass when a sampled key has no positive frequency.
Estimate sum_estimate(const FinalSample& sample, const FreqCollector& freqs, const KeyWeights& L,
                      const FunctionSpec& spec);
Estimate sum_estimate(const FinalSample& sample, const FreqCollector& freqs, const FunctionSpec& spec);

}  // namespace fsketch
