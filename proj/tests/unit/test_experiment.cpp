#include <doctest.h>

#include <sstream>

#include "fsketch/error.hpp"
#include "fsketch/experiment.hpp"
#include "fsketch/serialize.hpp"
#include "fsketch/stream.hpp"

using namespace fsketch;

TEST_CASE("bound column") {
  CHECK(nrmse_bound(25, 0.5) == doctest::Approx(0.834).epsilon(5e-4));
  CHECK(std::round(nrmse_bound(25, 0.5) * 1000) == 834);
  CHECK(std::round(nrmse_bound(50, 0.5) * 1000) == 577);
  CHECK(std::round(nrmse_bound(75, 0.5) * 1000) == 468);
  CHECK(std::round(nrmse_bound(100, 0.5) * 1000) == 404);
  CHECK_THROWS_AS(nrmse_bound(2, 0.5), Error);
}

TEST_CASE("nrmse") {
  CHECK(nrmse({3, 3, 3}, 3) == 0.0);
  CHECK(nrmse({2, 4}, 3) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("zipf source descriptor") {
  const auto z = parse_zipf_source("zipf:alpha=1.2,n=50,seed=4");
  REQUIRE(z);
  CHECK(z->alpha == 1.2);
  CHECK(z->n == 50);
  CHECK(z->seed == 4);
  CHECK_FALSE(parse_zipf_source("data.tsv"));
  CHECK_THROWS_AS(parse_zipf_source("zipf:beta=1"), Error);
}

TEST_CASE("single key has zero error") {
  std::vector<Element> stream(50, Element{"only", 1.0});
  ExperimentConfig cfg;
  cfg.ks = {3};
  cfg.reps = 5;
  const auto report = run_experiment(cfg, stream, "one");
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].nrmse == 0.0);
  CHECK(report.rows[0].ppswor_nrmse == 0.0);
  CHECK(report.rows[0].priority_nrmse == 0.0);
}

TEST_CASE("deterministic report bytes") {
  ExperimentConfig cfg;
  cfg.source = "zipf:alpha=1.5,n=5000,seed=2";
  cfg.ks = {5, 10};
  cfg.reps = 4;
  cfg.track_size = true;
  cfg.domain_prefix = "1";
  auto render = [&] {
    std::ostringstream out;
    const auto report = run_experiment(cfg);
    write_csv(out, report);
    out << to_json(report).dump();
    return out.str();
  };
  const std::string first = render();
  CHECK(first == render());
  cfg.workers = 3;
  CHECK(first == render());
}

TEST_CASE("size tracking and partitions") {
  const auto stream = zipf_stream(1.5, 5000, 6);
  ExperimentConfig cfg;
  cfg.ks = {5};
  cfg.track_size = true;
  const RepetitionResult r = run_repetition(stream, cfg, 5, 1);
  CHECK(r.max_keys >= 5);
  CHECK(r.max_elements >= r.max_keys);
  CHECK(r.mean_sideline <= r.max_sideline);

  const SamplerSketch one = sketch_partitioned(stream, 1, 5, 0.5, make_moment(0.5), 3, 4, {});
  const SamplerSketch four = sketch_partitioned(stream, 4, 5, 0.5, make_moment(0.5), 3, 4, {}, 4);
  CHECK(one.sum() == four.sum());
  CHECK(four.sideline().max_value() < four.gamma());
}

TEST_CASE("kept samples match with and without optimizations") {
  const auto stream = zipf_stream(1.5, 3000, 6);
  ExperimentConfig cfg;
  cfg.ks = {6};
  cfg.baselines = false;
  const RepetitionResult plain = run_repetition(stream, cfg, 6, 9);
  CHECK_FALSE(plain.sample.has_value());
  cfg.keep_samples = true;
  const RepetitionResult on = run_repetition(stream, cfg, 6, 9);
  cfg.options = SketchOptions{false, false};
  const RepetitionResult off = run_repetition(stream, cfg, 6, 9);
  REQUIRE(on.sample.has_value());
  CHECK(on.sample == off.sample);
  CHECK(on.estimate == plain.estimate);
}
