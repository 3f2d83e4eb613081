#include "fsketch/final_sample.hpp"

#include <cmath>

#include "fsketch/error.hpp"

namespace fsketch {

std::vector<SeedEntry> FinalSample::sampled() const {
  if (!has_threshold()) return entries;
  return {entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(entries.size() - 1)};
}

BottomK seed_rescale(const BottomK& sample, double factor, Rescale mode) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw Error(ErrorKind::kInvalidParameter, "rescale factor must be positive and finite");
  }
  BottomK out(sample.capacity());
  sample.for_each([&](const std::string& key, double v) {
    out.process(key, mode == Rescale::kMultiply ? v * factor : v / factor);
  });
  return out;
}

FinalSample make_final_sample(std::vector<BottomK::Entry> sorted, std::size_t k, double gamma, SampleParams params) {
  FinalSample out;
  out.entries.reserve(sorted.size());
  for (auto& e : sorted) out.entries.push_back(SeedEntry{std::move(e.key), e.value});
  if (out.entries.size() >= k) {
    out.entries.resize(k);
    out.tau = out.entries.back().seed;
  }
  out.gamma = gamma;
  out.params = std::move(params);
  return out;
}

FinalSample produce_sample(const SamplerSketch& sketch) {
  if (sketch.empty()) throw Error(ErrorKind::kEmptySample, "sketch has not processed any element");
  const double gamma = sketch.gamma();
  const FunctionSpec& spec = sketch.spec();

  SumMaxSketch summax = sketch.summax();
  const double a = spec.A(gamma);
  if (a > 0.0) {
    const ExpHash& h = sketch.hash();
    sketch.sideline().for_each([&](const std::string& key, const Sideline::Slot& slot) {
      summax.process_score(key, h(key, slot.replica) / a);
    });
  }

  BottomK merged = seed_rescale(summax.sample(), static_cast<double>(sketch.r()), Rescale::kMultiply);
  const double b = spec.B(gamma);
  if (b > 0.0) merged.merge(seed_rescale(sketch.ppswor().sample(), b, Rescale::kDivide));

  return make_final_sample(merged.sorted_entries(), sketch.k(), gamma,
                           SampleParams{sketch.k(), sketch.eps(), sketch.r(), spec.name()});
}

}  // namespace fsketch
