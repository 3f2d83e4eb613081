#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

#include "fsketch/error.hpp"
#include "fsketch/estimator.hpp"
#include "fsketch/experiment.hpp"
#include "fsketch/final_sample.hpp"
#include "fsketch/sampler.hpp"
#include "fsketch/serialize.hpp"
#include "fsketch/stream.hpp"

using namespace fsketch;

namespace {

struct SketchFlags {
  std::size_t k = 25;
  double eps = 0.5;
  std::string fn = "sqrt";
  std::uint64_t seed = 1;
  bool no_opt_sideline = false;
  bool no_opt_trunc = false;
  std::size_t partitions = 1;

  SketchOptions options() const { return SketchOptions{!no_opt_sideline, !no_opt_trunc}; }
};

void add_sketch_flags(CLI::App* cmd, SketchFlags& f) {
  cmd->add_option("--k", f.k, "sample size")->check(CLI::Range(3, 1 << 20));
  cmd->add_option("--eps", f.eps, "range split parameter in (0, 0.5]");
  cmd->add_option("--fn", f.fn, "sqrt | moment:<p> | log1p | softcap:<T>");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_flag("--no-opt-sideline", f.no_opt_sideline, "keep every sideline entry");
  cmd->add_flag("--no-opt-ppswor-trunc", f.no_opt_trunc, "keep every PPSWOR entry");
  cmd->add_option("--partitions", f.partitions, "sketch N stream partitions and merge")->check(CLI::PositiveNumber);
}

// Writes to `path`, or stdout for "" and "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kInvalidParameter, "cannot write '" + path + "'");
  out << text;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kInvalidParameter, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::kFormat, path + ": " + ex.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"f-weighted sampling sketches over unaggregated key/value streams"};
  app.require_subcommand(1);

  SketchFlags sk;
  std::string input = "-", output;
  bool track_size = false;
  auto* sketch_cmd = app.add_subcommand("sketch", "build a sketch from a TSV stream and write it as JSON");
  add_sketch_flags(sketch_cmd, sk);
  sketch_cmd->add_option("--input", input, "TSV file (key<TAB>value), - for stdin");
  sketch_cmd->add_option("--output", output, "sketch JSON (default stdout)");
  sketch_cmd->add_flag("--track-size", track_size, "report the maximum sketch size on stderr");

  std::string sketch_path;
  auto* sample_cmd = app.add_subcommand("sample", "produce the final sample from a sketch");
  sample_cmd->add_option("--input", sketch_path, "sketch JSON")->required();
  sample_cmd->add_option("--output", output, "sample JSON (default stdout)");

  std::string sample_path, domain;
  auto* estimate_cmd = app.add_subcommand("estimate", "second pass over the stream and sum estimate");
  estimate_cmd->add_option("--sample", sample_path, "sample JSON")->required();
  estimate_cmd->add_option("--input", input, "TSV stream, - for stdin");
  estimate_cmd->add_option("--fn", sk.fn, "function the sample was built for (default: from sample)");
  estimate_cmd->add_option("--domain", domain, "only count keys with this prefix");
  estimate_cmd->add_option("--output", output, "estimate JSON (default stdout)");

  ExperimentConfig cfg;
  std::string ks = "25";
  std::string csv_path;
  bool no_baselines = false;
  auto* exp_cmd = app.add_subcommand("experiment", "NRMSE and size over repeated runs");
  add_sketch_flags(exp_cmd, sk);
  exp_cmd->add_option("--input", cfg.source, "TSV file or zipf:alpha=A,n=N,seed=S")->required();
  exp_cmd->add_option("--ks", ks, "comma separated k values (overrides --k)");
  exp_cmd->add_option("--reps", cfg.reps, "repetitions")->check(CLI::PositiveNumber);
  exp_cmd->add_option("--output", output, "JSON report with per-repetition estimates");
  exp_cmd->add_option("--csv", csv_path, "CSV summary (default stdout)");
  exp_cmd->add_option("--domain", cfg.domain_prefix, "estimate only over keys with this prefix");
  exp_cmd->add_flag("--track-size", cfg.track_size, "measure sketch size after every element");
  exp_cmd->add_option("--size-stride", cfg.size_stride, "measure size every j-th element")
      ->check(CLI::PositiveNumber);
  exp_cmd->add_option("--workers", cfg.workers, "parallel repetitions")->check(CLI::PositiveNumber);
  exp_cmd->add_flag("--no-baselines", no_baselines, "skip aggregated PPSWOR and priority sampling");

  double alpha = 1.5;
  std::size_t n = 200000;
  auto* zipf_cmd = app.add_subcommand("gen-zipf", "write a unit-value Zipf stream as TSV");
  zipf_cmd->add_option("--alpha", alpha, "exponent > 1");
  zipf_cmd->add_option("--n", n, "number of elements");
  zipf_cmd->add_option("--seed", sk.seed, "random seed");
  zipf_cmd->add_option("--output", output, "TSV output (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sketch_cmd) {
      const FunctionSpec spec = spec_from_name(sk.fn);
      const std::vector<Element> stream = read_elements(input);
      std::unique_ptr<SamplerSketch> sketch;
      SketchSize peak;
      if (sk.partitions > 1) {
        sketch = std::make_unique<SamplerSketch>(sketch_partitioned(stream, sk.partitions, sk.k, sk.eps, spec,
                                                                    sk.seed, sk.seed ^ 0x9e3779b97f4a7c15ULL,
                                                                    sk.options(), sk.partitions));
        peak = sketch->size();
      } else {
        sketch = std::make_unique<SamplerSketch>(sk.k, sk.eps, spec, RandomSource(sk.seed),
                                                 ExpHash(sk.seed ^ 0x9e3779b97f4a7c15ULL), sk.options());
        for (const auto& e : stream) {
          sketch->process(e);
          if (track_size) {
            const SketchSize s = sketch->size();
            peak.distinct_keys = std::max(peak.distinct_keys, s.distinct_keys);
            peak.stored_elements = std::max(peak.stored_elements, s.stored_elements);
          }
        }
      }
      if (track_size) {
        std::cerr << "max_keys=" << peak.distinct_keys << " max_elements=" << peak.stored_elements << '\n';
      }
      emit(output, to_json(*sketch).dump() + "\n");
    } else if (*sample_cmd) {
      const SamplerSketch sketch = sketch_from_json(read_json(sketch_path));
      emit(output, to_json(produce_sample(sketch)).dump(2) + "\n");
    } else if (*estimate_cmd) {
      const FinalSample sample = sample_from_json(read_json(sample_path));
      const FunctionSpec spec = spec_from_name(estimate_cmd->count("--fn") ? sk.fn : sample.params.spec_name);
      FreqCollector freqs(sample);
      for_each_element(input, [&](const Element& e) { freqs.process(e); });
      KeyWeights L;
      if (!domain.empty()) L = [&](const std::string& key) { return key.rfind(domain, 0) == 0 ? 1.0 : 0.0; };
      emit(output, to_json(sum_estimate(sample, freqs, L, spec)).dump(2) + "\n");
    } else if (*exp_cmd) {
      cfg.spec_name = sk.fn;
      cfg.eps = sk.eps;
      cfg.seed = sk.seed;
      cfg.partitions = sk.partitions;
      cfg.options = sk.options();
      cfg.baselines = !no_baselines;
      cfg.ks.clear();
      if (exp_cmd->count("--ks")) {
        std::stringstream list(ks);
        for (std::string item; std::getline(list, item, ',');) cfg.ks.push_back(std::stoul(item));
      } else {
        cfg.ks.push_back(sk.k);
      }
      const ExperimentReport report = run_experiment(cfg);
      std::ostringstream csv;
      write_csv(csv, report);
      emit(csv_path, csv.str());
      if (!output.empty()) emit(output, to_json(report).dump(2) + "\n");
    } else if (*zipf_cmd) {
      std::ostringstream out;
      write_elements(out, zipf_stream(alpha, n, sk.seed));
      emit(output, out.str());
    }
  } catch (const Error& ex) {
    std::cerr << "fsketch: " << ex.what() << '\n';
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "fsketch: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
