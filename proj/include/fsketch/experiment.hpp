#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fsketch/element.hpp"
#include "fsketch/final_sample.hpp"
#include "fsketch/sampler.hpp"

namespace fsketch {

struct ZipfSource {
  double alpha = 1.5;
  std::size_t n = 200000;
  std::uint64_t seed = 1;
};

/// "zipf:alpha=1.5,n=200000,seed=7" (any subset of fields); nullopt for
/// anything not starting with "zipf:".
std::optional<ZipfSource> parse_zipf_source(const std::string& text);

struct ExperimentConfig {
  std::string source;  // TSV path or zipf:... descriptor
  std::string spec_name = "sqrt";
  std::vector<std::size_t> ks{25};
  double eps = 0.5;
  std::size_t reps = 200;
  std::uint64_t seed = 1;
  std::string domain_prefix;  // L(x) = 1 iff the key starts with it
  bool track_size = false;
  std::size_t size_stride = 1;  // measure size every j-th element
  std::size_t partitions = 1;
  std::size_t workers = 1;
  bool baselines = true;
  bool keep_samples = false;  // store each repetition's FinalSample
  SketchOptions options;
};

struct RepetitionResult {
  std::size_t rep = 0;
  double estimate = 0.0;
  double ppswor_estimate = 0.0;
  double priority_estimate = 0.0;
  std::size_t max_keys = 0;
  std::size_t max_elements = 0;
  std::size_t max_sideline = 0;
  double mean_sideline = 0.0;
  std::optional<FinalSample> sample;
};

struct ConfigReport {
  std::string dataset;
  std::string spec_name;
  std::size_t k = 0;
  double eps = 0.0;
  std::size_t reps = 0;
  double truth = 0.0;
  double bound = 0.0;
  double nrmse = 0.0;
  double ppswor_nrmse = 0.0;
  double priority_nrmse = 0.0;
  double avg_max_keys = 0.0;
  std::size_t max_max_keys = 0;
  double avg_max_elements = 0.0;
  std::size_t max_max_elements = 0;
  std::vector<RepetitionResult> runs;
};

struct ExperimentReport {
  std::vector<ConfigReport> rows;
};

/// Worst-case coefficient of variation 2 / ((1 - eps) sqrt(k - 2)).
double nrmse_bound(std::size_t k, double eps);

/// sqrt(mean (est - truth)^2) / truth; 0 when every estimate is exact.
double nrmse(const std::vector<double>& estimates, double truth);

/// Sketch, finalize and estimate once. `rep_seed` fixes every random choice.
RepetitionResult run_repetition(const std::vector<Element>& stream, const ExperimentConfig& cfg, std::size_t k,
                                std::uint64_t rep_seed);

ExperimentReport run_experiment(const ExperimentConfig& cfg);
ExperimentReport run_experiment(const ExperimentConfig& cfg, const std::vector<Element>& stream,
                                const std::string& dataset);

/// Loads cfg.source as elements (TSV file or zipf descriptor).
std::vector<Element> load_source(const std::string& source);

void write_csv(std::ostream& out, const ExperimentReport& report);

/// Sketch built over `parts` partitions of the stream, each with an
/// independent random source, merged at the end.
SamplerSketch sketch_partitioned(const std::vector<Element>& stream, std::size_t parts, std::size_t k, double eps,
                                 const FunctionSpec& spec, std::uint64_t seed, std::uint64_t hash_seed,
                                 SketchOptions options, std::size_t workers = 1);

}  // namespace fsketch
