#pragma once

#include "json.hpp"

#include "fsketch/estimator.hpp"
#include "fsketch/experiment.hpp"
#include "fsketch/final_sample.hpp"
#include "fsketch/sampler.hpp"

namespace fsketch {

using json = nlohmann::json;

// Infinite thresholds are written as null.
json to_json(const SamplerSketch& sketch);
/// Only registered function names can be restored. Throws format-error on
/// malformed documents.
SamplerSketch sketch_from_json(const json& doc);

json to_json(const FinalSample& sample);
FinalSample sample_from_json(const json& doc);

json to_json(const Estimate& estimate);
json to_json(const ExperimentReport& report);

}  // namespace fsketch
