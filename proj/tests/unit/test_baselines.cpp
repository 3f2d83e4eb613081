#include <doctest.h>

#include "fsketch/baselines.hpp"
#include "fsketch/error.hpp"
#include "fsketch/ppswor.hpp"
#include "support.hpp"

using namespace fsketch;

namespace {

const WeightFn kIdentity = [](double v) { return v; };

AggregatedTable ten_keys() {
  AggregatedTable t;
  for (int i = 1; i <= 10; ++i) t["k" + std::to_string(i)] = i * i;
  return t;
}

}  // namespace

TEST_CASE("aggregate") {
  const AggregatedTable t = aggregate({{"a", 1}, {"a", 2}, {"b", 1}});
  CHECK(t == AggregatedTable{{"a", 3}, {"b", 1}});
  CHECK(aggregate({}).empty());
  AggregatedTable left = aggregate({{"a", 1}}), right = aggregate({{"a", 2}, {"b", 1}});
  merge_tables(left, right);
  CHECK(left == t);
  CHECK_THROWS_AS(aggregate({{"a", -1}}), Error);
}

TEST_CASE("small tables are recovered exactly") {
  const AggregatedTable t{{"a", 3}, {"b", 5}};
  RandomSource rng(1);
  const BaselineSample pp = ppswor_aggregated(t, kIdentity, 3, rng);
  CHECK(pp.complete);
  CHECK(baseline_sum_estimate(Baseline::kPpswor, pp, t, kIdentity).value == 8.0);
  const BaselineSample pr = priority_sample(t, kIdentity, 2, rng);
  CHECK(pr.complete);
  CHECK(baseline_sum_estimate(Baseline::kPriority, pr, t, kIdentity).value == 8.0);
  CHECK_THROWS_AS(ppswor_aggregated(t, kIdentity, 2, rng), Error);
}

TEST_CASE("both estimators are unbiased with bounded variance") {
  const AggregatedTable t = ten_keys();
  double total = 0.0;
  for (const auto& [k, v] : t) total += v;
  const std::size_t k = 4;
  std::vector<double> pp, pr;
  std::map<std::string, std::vector<double>> per_key;
  RandomSource rng(5);
  for (int rep = 0; rep < 100000; ++rep) {
    const BaselineSample a = ppswor_aggregated(t, kIdentity, k, rng);
    const Estimate ea = baseline_sum_estimate(Baseline::kPpswor, a, t, kIdentity);
    pp.push_back(ea.value);
    for (const auto& [key, w] : t) per_key[key].push_back(ea.per_key.count(key) ? ea.per_key.at(key) : 0.0);
    pr.push_back(baseline_sum_estimate(Baseline::kPriority, priority_sample(t, kIdentity, k, rng), t, kIdentity)
                     .value);
  }
  const auto mpp = oracle::moments(pp), mpr = oracle::moments(pr);
  CHECK(std::abs(mpp.mean - total) < 4 * mpp.se);
  CHECK(std::abs(mpr.mean - total) < 4 * mpr.se);
  for (const auto& [key, w] : t) {
    const auto m = oracle::moments(per_key[key]);
    CHECK_MESSAGE(m.var <= 1.05 * w * total / (k - 2), key);
  }
}

TEST_CASE("dominant weight is always retained by priority sampling") {
  AggregatedTable t = ten_keys();
  t["big"] = 1e7;
  RandomSource rng(8);
  int kept = 0;
  for (int rep = 0; rep < 2000; ++rep) {
    for (const auto& e : priority_sample(t, kIdentity, 2, rng).sampled()) kept += e.key == "big";
  }
  CHECK(kept >= 1995);
}

TEST_CASE("scaling weights does not change the retained-set distribution") {
  const AggregatedTable t = ten_keys();
  std::map<std::string, int> a, b;
  RandomSource r1(3), r2(3);
  const WeightFn scaled = [](double v) { return 1000.0 * v; };
  for (int rep = 0; rep < 20000; ++rep) {
    for (const auto& e : ppswor_aggregated(t, kIdentity, 3, r1).sampled()) ++a[e.key];
    for (const auto& e : ppswor_aggregated(t, scaled, 3, r2).sampled()) ++b[e.key];
  }
  // Same draws up to the scale: identical counts.
  CHECK(a == b);
}

TEST_CASE("aggregated and unaggregated PPSWOR seeds agree in distribution") {
  // Key x appears as values 1, 2, 3 (frequency 6) among other keys.
  std::vector<double> raw, agg;
  const AggregatedTable t{{"x", 6.0}, {"y", 2.0}};
  RandomSource rng(11);
  for (std::uint64_t s = 0; s < 5000; ++s) {
    PpsworSketch sk(3, RandomSource(s + 1000000));
    for (const Element& e : {Element{"x", 1}, Element{"y", 2}, Element{"x", 2}, Element{"x", 3}}) sk.process(e);
    raw.push_back(*sk.sample().find("x"));
    const BaselineSample b = ppswor_aggregated(t, kIdentity, 3, rng);
    for (const auto& e : b.entries)
      if (e.key == "x") agg.push_back(e.seed);
  }
  CHECK(oracle::ks_two_sample(raw, agg) < oracle::ks_critical(raw.size(), agg.size()));
}
