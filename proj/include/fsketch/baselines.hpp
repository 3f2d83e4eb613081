#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "fsketch/element.hpp"
#include "fsketch/estimator.hpp"
#include "fsketch/final_sample.hpp"
#include "fsketch/random.hpp"

namespace fsketch {

/// Exact key -> frequency table, ordered by key so that per-key draws are
/// taken in a reproducible order.
using AggregatedTable = std::map<std::string, double>;

AggregatedTable aggregate(const std::vector<Element>& stream);
void add_to(AggregatedTable& table, const Element& e);
void merge_tables(AggregatedTable& into, const AggregatedTable& other);

using WeightFn = std::function<double(double)>;

/// Bottom-k sample over an aggregated table. For PPSWOR the entries are
/// ascending seeds Exp[w]; for priority sampling they are descending
/// priorities w/u. tau is the conditioning threshold (+inf for PPSWOR and 0
/// for priority sampling when every key was taken).
struct BaselineSample {
  std::vector<SeedEntry> entries;
  double tau = 0.0;
  bool complete = false;

  /// Keys the estimator sums over.
  std::vector<SeedEntry> sampled() const;
};

/// Throws invalid-parameter unless k >= 3.
BaselineSample ppswor_aggregated(const AggregatedTable& table, const WeightFn& weight, std::size_t k,
                                 RandomSource& rng);
/// w / (1 - exp(-w tau)); w itself when tau is +inf.
double ppswor_aggregated_estimate(double w, double tau);

/// Throws invalid-parameter unless k >= 1.
BaselineSample priority_sample(const AggregatedTable& table, const WeightFn& weight, std::size_t k,
                               RandomSource& rng);
/// max(w, tau).
double priority_estimate(double w, double tau);

enum class Baseline { kPpswor, kPriority };

Estimate baseline_sum_estimate(Baseline kind, const BaselineSample& sample, const AggregatedTable& table,
                               const WeightFn& weight, const KeyWeights& L = {});

}  // namespace fsketch
