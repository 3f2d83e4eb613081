#include "fsketch/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "fsketch/baselines.hpp"
#include "fsketch/error.hpp"
#include "fsketch/estimator.hpp"
#include "fsketch/final_sample.hpp"
#include "fsketch/stream.hpp"

namespace fsketch {

namespace {

template <class T>
T parse_field(std::string_view text, std::string_view what) {
  T v{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw Error(ErrorKind::kInvalidParameter, "bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

// Runs fn(i) for i in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

KeyWeights domain_weights(const std::string& prefix) {
  if (prefix.empty()) return {};
  return [prefix](const std::string& key) { return key.rfind(prefix, 0) == 0 ? 1.0 : 0.0; };
}

struct Shared {
  const std::vector<Element>& stream;
  const AggregatedTable& table;
  const FunctionSpec& spec;
};

RepetitionResult repetition(const Shared& in, const ExperimentConfig& cfg, std::size_t k, std::uint64_t rep_seed) {
  const RandomSource base(rep_seed);
  const std::uint64_t sketch_seed = base.stream(0).next_u64();
  const std::uint64_t hash_seed = base.stream(1).next_u64();
  RepetitionResult out;

  std::optional<SamplerSketch> sketch;
  if (cfg.partitions > 1) {
    sketch.emplace(sketch_partitioned(in.stream, cfg.partitions, k, cfg.eps, in.spec, sketch_seed, hash_seed,
                                      cfg.options));
    const SketchSize size = sketch->size();
    out.max_keys = size.distinct_keys;
    out.max_elements = size.stored_elements;
    out.max_sideline = sketch->sideline().size();
    out.mean_sideline = static_cast<double>(out.max_sideline);
  } else {
    sketch.emplace(k, cfg.eps, in.spec, RandomSource(sketch_seed), ExpHash(hash_seed), cfg.options);
    const std::size_t stride = std::max<std::size_t>(1, cfg.size_stride);
    double sideline_total = 0.0;
    std::size_t measured = 0;
    for (std::size_t i = 0; i < in.stream.size(); ++i) {
      sketch->process(in.stream[i]);
      if (!cfg.track_size || (i + 1) % stride != 0) continue;
      const SketchSize size = sketch->size();
      const std::size_t side = sketch->sideline().size();
      out.max_keys = std::max(out.max_keys, size.distinct_keys);
      out.max_elements = std::max(out.max_elements, size.stored_elements);
      out.max_sideline = std::max(out.max_sideline, side);
      sideline_total += static_cast<double>(side);
      ++measured;
    }
    out.mean_sideline = measured ? sideline_total / static_cast<double>(measured) : 0.0;
  }

  const FinalSample sample = produce_sample(*sketch);
  FreqCollector freqs(sample);
  for (const auto& e : in.stream) freqs.process(e);
  const KeyWeights L = domain_weights(cfg.domain_prefix);
  out.estimate = sum_estimate(sample, freqs, L, in.spec).value;
  if (cfg.keep_samples) out.sample = sample;

  if (cfg.baselines) {
    const WeightFn f = [&](double nu) { return in.spec.f(nu); };
    RandomSource pp_rng = base.stream(2);
    RandomSource pr_rng = base.stream(3);
    const BaselineSample pp = ppswor_aggregated(in.table, f, k, pp_rng);
    out.ppswor_estimate = baseline_sum_estimate(Baseline::kPpswor, pp, in.table, f, L).value;
    const BaselineSample pr = priority_sample(in.table, f, k, pr_rng);
    out.priority_estimate = baseline_sum_estimate(Baseline::kPriority, pr, in.table, f, L).value;
  }
  return out;
}

std::string dataset_name(const std::string& source) {
  if (auto z = parse_zipf_source(source)) {
    std::ostringstream name;
    name << "zipf" << z->alpha;
    return name.str();
  }
  return std::filesystem::path(source).stem().string();
}

}  // namespace

std::optional<ZipfSource> parse_zipf_source(const std::string& text) {
  constexpr std::string_view kPrefix = "zipf:";
  if (text.rfind(kPrefix, 0) != 0) return std::nullopt;
  ZipfSource z;
  std::string_view rest = std::string_view(text).substr(kPrefix.size());
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorKind::kInvalidParameter, "bad zipf field '" + std::string(item) + "'");
    const std::string_view name = item.substr(0, eq);
    const std::string_view value = item.substr(eq + 1);
    if (name == "alpha") {
      z.alpha = parse_field<double>(value, "zipf alpha");
    } else if (name == "n") {
      z.n = parse_field<std::size_t>(value, "zipf n");
    } else if (name == "seed") {
      z.seed = parse_field<std::uint64_t>(value, "zipf seed");
    } else {
      throw Error(ErrorKind::kInvalidParameter, "unknown zipf field '" + std::string(name) + "'");
    }
  }
  return z;
}

double nrmse_bound(std::size_t k, double eps) {
  if (k < 3 || !(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::kInvalidParameter, "bound needs k >= 3, 0 < eps < 1");
  return 2.0 / ((1.0 - eps) * std::sqrt(static_cast<double>(k) - 2.0));
}

double nrmse(const std::vector<double>& estimates, double truth) {
  if (estimates.empty() || truth == 0.0) return 0.0;
  double sq = 0.0;
  for (double e : estimates) sq += (e - truth) * (e - truth);
  return std::sqrt(sq / static_cast<double>(estimates.size())) / std::abs(truth);
}

std::vector<Element> load_source(const std::string& source) {
  if (auto z = parse_zipf_source(source)) return zipf_stream(z->alpha, z->n, z->seed);
  return read_elements(source);
}

SamplerSketch sketch_partitioned(const std::vector<Element>& stream, std::size_t parts, std::size_t k, double eps,
                                 const FunctionSpec& spec, std::uint64_t seed, std::uint64_t hash_seed,
                                 SketchOptions options, std::size_t workers) {
  parts = std::max<std::size_t>(1, parts);
  const RandomSource base(seed);
  std::vector<SamplerSketch> sketches;
  sketches.reserve(parts);
  for (std::size_t p = 0; p < parts; ++p) {
    sketches.emplace_back(k, eps, spec, base.stream(p), ExpHash(hash_seed), options);
  }
  const std::size_t chunk = (stream.size() + parts - 1) / parts;
  parallel_for(parts, workers, [&](std::size_t p) {
    const std::size_t lo = std::min(stream.size(), p * chunk);
    const std::size_t hi = std::min(stream.size(), lo + chunk);
    for (std::size_t i = lo; i < hi; ++i) sketches[p].process(stream[i]);
  });
  for (std::size_t p = 1; p < parts; ++p) sketches[0].merge(sketches[p]);
  return std::move(sketches[0]);
}

RepetitionResult run_repetition(const std::vector<Element>& stream, const ExperimentConfig& cfg, std::size_t k,
                                std::uint64_t rep_seed) {
  const AggregatedTable table = aggregate(stream);
  const FunctionSpec spec = spec_from_name(cfg.spec_name);
  return repetition(Shared{stream, table, spec}, cfg, k, rep_seed);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  return run_experiment(cfg, load_source(cfg.source), dataset_name(cfg.source));
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const std::vector<Element>& stream,
                                const std::string& dataset) {
  if (cfg.reps < 1) throw Error(ErrorKind::kInvalidParameter, "reps must be at least 1");
  if (cfg.ks.empty()) throw Error(ErrorKind::kInvalidParameter, "no k values given");
  const FunctionSpec spec = spec_from_name(cfg.spec_name);
  const AggregatedTable table = aggregate(stream);
  if (table.empty()) throw Error(ErrorKind::kInvalidParameter, "input stream is empty");
  const KeyWeights L = domain_weights(cfg.domain_prefix);
  double truth = 0.0;
  for (const auto& [key, nu] : table) truth += (L ? L(key) : 1.0) * spec.f(nu);

  const Shared shared{stream, table, spec};
  const RandomSource master(cfg.seed);
  ExperimentReport report;
  for (std::size_t k : cfg.ks) {
    ConfigReport row;
    row.dataset = dataset;
    row.spec_name = spec.name();
    row.k = k;
    row.eps = cfg.eps;
    row.reps = cfg.reps;
    row.truth = truth;
    row.bound = nrmse_bound(k, cfg.eps);
    row.runs.resize(cfg.reps);
    const RandomSource per_k = master.stream(k);
    parallel_for(cfg.reps, cfg.workers, [&](std::size_t rep) {
      row.runs[rep] = repetition(shared, cfg, k, per_k.stream(rep).next_u64());
      row.runs[rep].rep = rep;
    });

    std::vector<double> est, pp, pr;
    double keys = 0.0, elems = 0.0;
    for (const auto& run : row.runs) {
      est.push_back(run.estimate);
      pp.push_back(run.ppswor_estimate);
      pr.push_back(run.priority_estimate);
      keys += static_cast<double>(run.max_keys);
      elems += static_cast<double>(run.max_elements);
      row.max_max_keys = std::max(row.max_max_keys, run.max_keys);
      row.max_max_elements = std::max(row.max_max_elements, run.max_elements);
    }
    row.nrmse = nrmse(est, truth);
    if (cfg.baselines) {
      row.ppswor_nrmse = nrmse(pp, truth);
      row.priority_nrmse = nrmse(pr, truth);
    }
    row.avg_max_keys = keys / static_cast<double>(cfg.reps);
    row.avg_max_elements = elems / static_cast<double>(cfg.reps);
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_csv(std::ostream& out, const ExperimentReport& report) {
  out << "dataset,fn,k,eps,reps,truth,bound,nrmse,ppswor_nrmse,priority_nrmse,"
         "avg_max_keys,max_max_keys,avg_max_elements,max_max_elements\n";
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(6);
  for (const auto& row : report.rows) {
    out << row.dataset << ',' << row.spec_name << ',' << row.k << ',' << row.eps << ',' << row.reps << ','
        << row.truth << ',' << std::fixed << std::setprecision(3) << row.bound << std::defaultfloat
        << std::setprecision(6) << ',' << row.nrmse << ',' << row.ppswor_nrmse << ',' << row.priority_nrmse << ','
        << row.avg_max_keys << ',' << row.max_max_keys << ',' << row.avg_max_elements << ','
        << row.max_max_elements << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

}  // namespace fsketch
