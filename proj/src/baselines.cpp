#include "fsketch/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "fsketch/bottom_k.hpp"
#include "fsketch/error.hpp"

namespace fsketch {

namespace {

double checked_weight(const WeightFn& weight, double nu, const std::string& key) {
  const double w = weight(nu);
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw Error(ErrorKind::kInvalidParameter, "weight of key '" + key + "' must be positive and finite");
  }
  return w;
}

}  // namespace

void add_to(AggregatedTable& table, const Element& e) {
  require_valid(e);
  table[e.key] += e.val;
}

AggregatedTable aggregate(const std::vector<Element>& stream) {
  AggregatedTable table;
  for (const auto& e : stream) add_to(table, e);
  return table;
}

void merge_tables(AggregatedTable& into, const AggregatedTable& other) {
  for (const auto& [key, nu] : other) into[key] += nu;
}

std::vector<SeedEntry> BaselineSample::sampled() const {
  if (complete || entries.empty()) return entries;
  return {entries.begin(), entries.end() - 1};
}

BaselineSample ppswor_aggregated(const AggregatedTable& table, const WeightFn& weight, std::size_t k,
                                 RandomSource& rng) {
  if (k < 3) throw Error(ErrorKind::kInvalidParameter, "k must be at least 3");
  BottomK sample(k);
  for (const auto& [key, nu] : table) sample.process(key, rng.exponential(checked_weight(weight, nu, key)));
  BaselineSample out;
  for (auto& e : sample.sorted_entries()) out.entries.push_back(SeedEntry{std::move(e.key), e.value});
  out.complete = out.entries.size() < k;
  out.tau = out.complete ? std::numeric_limits<double>::infinity() : out.entries.back().seed;
  return out;
}

double ppswor_aggregated_estimate(double w, double tau) {
  if (std::isinf(tau)) return w;
  return w / -std::expm1(-w * tau);
}

BaselineSample priority_sample(const AggregatedTable& table, const WeightFn& weight, std::size_t k,
                               RandomSource& rng) {
  if (k < 1) throw Error(ErrorKind::kInvalidParameter, "k must be at least 1");
  // Keep the k+1 largest priorities; a bottom-k over 1/priority does exactly that.
  BottomK inverse(k + 1);
  for (const auto& [key, nu] : table) {
    const double w = checked_weight(weight, nu, key);
    inverse.process(key, rng.uniform_open() / w);
  }
  BaselineSample out;
  for (auto& e : inverse.sorted_entries()) out.entries.push_back(SeedEntry{std::move(e.key), 1.0 / e.value});
  out.complete = out.entries.size() <= k;
  out.tau = out.complete ? 0.0 : out.entries.back().seed;
  return out;
}

double priority_estimate(double w, double tau) { return std::max(w, tau); }

Estimate baseline_sum_estimate(Baseline kind, const BaselineSample& sample, const AggregatedTable& table,
                               const WeightFn& weight, const KeyWeights& L) {
  Estimate out;
  for (const auto& e : sample.sampled()) {
    const double l = L ? L(e.key) : 1.0;
    if (l == 0.0) continue;
    auto it = table.find(e.key);
    if (it == table.end()) {
      throw Error(ErrorKind::kIncompleteSecondPass, "sampled key '" + e.key + "' missing from the table");
    }
    const double w = checked_weight(weight, it->second, e.key);
    const double est =
        kind == Baseline::kPpswor ? ppswor_aggregated_estimate(w, sample.tau) : priority_estimate(w, sample.tau);
    out.per_key[e.key] = est;
    out.value += l * est;
  }
  return out;
}

}  // namespace fsketch
