#include "fsketch/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fsketch/error.hpp"

namespace fsketch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_or_inf(const json& v) { return v.is_null() ? kInf : v.get<double>(); }

json entries_json(const BottomK& sample) {
  json out = json::array();
  for (const auto& e : sample.sorted_entries()) out.push_back(json::array({e.key, e.value}));
  return out;
}

std::vector<BottomK::Entry> entries_from(const json& arr) {
  std::vector<BottomK::Entry> out;
  for (const auto& item : arr) out.push_back(BottomK::Entry{item.at(0).get<std::string>(), item.at(1).get<double>()});
  return out;
}

template <class Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::kFormat, ex.what());
  }
}

}  // namespace

json to_json(const SamplerSketch& s) {
  json side = json::array();
  std::vector<Sideline::Item> items;
  s.sideline().for_each([&](const std::string& key, const Sideline::Slot& slot) {
    items.push_back(Sideline::Item{key, slot.replica, slot.value, slot.score});
  });
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    return a.key != b.key ? a.key < b.key : a.replica < b.replica;
  });
  for (const auto& item : items) side.push_back(json::array({item.key, item.replica, item.value}));

  return json{
      {"k", s.k()},
      {"eps", s.eps()},
      {"r", s.r()},
      {"fn", s.spec().name()},
      {"options", {{"prune_sideline", s.options().prune_sideline}, {"truncate_ppswor", s.options().truncate_ppswor}}},
      {"rng", {{"seed", s.rng().seed()}, {"counter", s.rng().counter()}}},
      {"hash_seed", s.hash().seed()},
      {"sum", s.sum()},
      {"gamma", finite_or_null(s.gamma())},
      {"ppswor", entries_json(s.ppswor().sample())},
      {"summax", entries_json(s.summax().sample())},
      {"sideline", side},
  };
}

SamplerSketch sketch_from_json(const json& doc) {
  return guarded([&] {
    SketchOptions options;
    options.prune_sideline = doc.at("options").at("prune_sideline").get<bool>();
    options.truncate_ppswor = doc.at("options").at("truncate_ppswor").get<bool>();
    const RandomSource rng(doc.at("rng").at("seed").get<std::uint64_t>(),
                           doc.at("rng").at("counter").get<std::uint64_t>());
    std::vector<Sideline::Item> side;
    for (const auto& item : doc.at("sideline")) {
      side.push_back(Sideline::Item{item.at(0).get<std::string>(), item.at(1).get<std::uint32_t>(),
                                    item.at(2).get<double>(), 0.0});
    }
    return SamplerSketch::restore(doc.at("k").get<std::size_t>(), doc.at("eps").get<double>(),
                                  spec_from_name(doc.at("fn").get<std::string>()), rng,
                                  ExpHash(doc.at("hash_seed").get<std::uint64_t>()), options,
                                  doc.at("sum").get<double>(), entries_from(doc.at("ppswor")),
                                  entries_from(doc.at("summax")), side);
  });
}

json to_json(const FinalSample& s) {
  json entries = json::array();
  for (const auto& e : s.entries) entries.push_back(json::array({e.key, e.seed}));
  return json{
      {"entries", entries},
      {"tau", finite_or_null(s.tau)},
      {"gamma", finite_or_null(s.gamma)},
      {"params", {{"k", s.params.k}, {"eps", s.params.eps}, {"r", s.params.r}, {"fn", s.params.spec_name}}},
  };
}

FinalSample sample_from_json(const json& doc) {
  return guarded([&] {
    FinalSample s;
    for (const auto& item : doc.at("entries")) {
      s.entries.push_back(SeedEntry{item.at(0).get<std::string>(), item.at(1).get<double>()});
    }
    s.tau = number_or_inf(doc.at("tau"));
    s.gamma = number_or_inf(doc.at("gamma"));
    const json& p = doc.at("params");
    s.params = SampleParams{p.at("k").get<std::size_t>(), p.at("eps").get<double>(), p.at("r").get<std::uint32_t>(),
                            p.at("fn").get<std::string>()};
    if (s.params.r == 0 || s.entries.size() > s.params.k) throw Error(ErrorKind::kFormat, "inconsistent sample");
    return s;
  });
}

json to_json(const Estimate& e) {
  json per_key = json::object();
  for (const auto& [key, v] : e.per_key) per_key[key] = v;
  return json{{"value", e.value}, {"per_key", per_key}};
}

json to_json(const ExperimentReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json runs = json::array();
    for (const auto& run : row.runs) {
      runs.push_back(json{
          {"rep", run.rep},
          {"estimate", run.estimate},
          {"ppswor_estimate", run.ppswor_estimate},
          {"priority_estimate", run.priority_estimate},
          {"max_keys", run.max_keys},
          {"max_elements", run.max_elements},
          {"max_sideline", run.max_sideline},
          {"mean_sideline", run.mean_sideline},
      });
    }
    rows.push_back(json{
        {"dataset", row.dataset},
        {"fn", row.spec_name},
        {"k", row.k},
        {"eps", row.eps},
        {"reps", row.reps},
        {"truth", row.truth},
        {"bound", row.bound},
        {"nrmse", row.nrmse},
        {"ppswor_nrmse", row.ppswor_nrmse},
        {"priority_nrmse", row.priority_nrmse},
        {"avg_max_keys", row.avg_max_keys},
        {"max_max_keys", row.max_max_keys},
        {"avg_max_elements", row.avg_max_elements},
        {"max_max_elements", row.max_max_elements},
        {"runs", runs},
    });
  }
  return json{{"rows", rows}};
}

}  // namespace fsketch
