#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fsketch/error.hpp"
#include "fsketch/estimator.hpp"
#include "fsketch/experiment.hpp"
#include "fsketch/final_sample.hpp"
#include "fsketch/sampler.hpp"
#include "fsketch/serialize.hpp"
#include "fsketch/stream.hpp"
#include "fsketch/transforms.hpp"

namespace py = pybind11;
using namespace fsketch;

namespace {

using Pairs = std::vector<std::pair<std::string, double>>;

std::vector<Element> to_elements(const Pairs& items) {
  std::vector<Element> out;
  out.reserve(items.size());
  for (const auto& [key, val] : items) out.push_back({key, val});
  return out;
}

Pairs to_pairs(const std::vector<Element>& elements) {
  Pairs out;
  out.reserve(elements.size());
  for (const auto& e : elements) out.emplace_back(e.key, e.val);
  return out;
}

}  // namespace

PYBIND11_MODULE(_fsketch, m) {
  m.doc() = "Composable sampling sketches for concave sublinear frequency statistics.";

  static py::exception<Error> error(m, "FsketchError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error(e.what());
    }
  });

  py::class_<FunctionSpec>(m, "FunctionSpec")
      .def(py::init([](const std::string& name) { return spec_from_name(name); }), py::arg("name"))
      .def_property_readonly("name", &FunctionSpec::name)
      .def("f", &FunctionSpec::f, py::arg("nu"))
      .def("A", &FunctionSpec::A, py::arg("gamma"))
      .def("B", &FunctionSpec::B, py::arg("gamma"))
      .def("laplace_c", [](const FunctionSpec& s, double nu, double lo, double hi) { return laplace_c(s, nu, lo, hi); },
           py::arg("nu"), py::arg("lo") = 0.0, py::arg("hi") = std::numeric_limits<double>::infinity())
      .def("__repr__", [](const FunctionSpec& s) { return "FunctionSpec('" + s.name() + "')"; });

  py::class_<SketchOptions>(m, "SketchOptions")
      .def(py::init([](bool prune, bool trunc) { return SketchOptions{prune, trunc}; }),
           py::arg("prune_sideline") = true, py::arg("truncate_ppswor") = true)
      .def_readwrite("prune_sideline", &SketchOptions::prune_sideline)
      .def_readwrite("truncate_ppswor", &SketchOptions::truncate_ppswor);

  py::class_<SeedEntry>(m, "SeedEntry")
      .def_readonly("key", &SeedEntry::key)
      .def_readonly("seed", &SeedEntry::seed)
      .def("__repr__", [](const SeedEntry& e) { return "SeedEntry('" + e.key + "', " + std::to_string(e.seed) + ")"; });

  py::class_<FinalSample>(m, "FinalSample")
      .def_readonly("entries", &FinalSample::entries)
      .def_readonly("tau", &FinalSample::tau)
      .def_readonly("gamma", &FinalSample::gamma)
      .def_property_readonly("k", [](const FinalSample& s) { return s.params.k; })
      .def_property_readonly("r", [](const FinalSample& s) { return s.params.r; })
      .def_property_readonly("fn", [](const FinalSample& s) { return s.params.spec_name; })
      .def("sampled", &FinalSample::sampled)
      .def("keys", [](const FinalSample& s) {
        std::vector<std::string> keys;
        for (const auto& e : s.sampled()) keys.push_back(e.key);
        return keys;
      })
      .def("to_json", [](const FinalSample& s) { return to_json(s).dump(); })
      .def_static("from_json", [](const std::string& text) { return sample_from_json(json::parse(text)); })
      .def(py::self == py::self);

  py::class_<SamplerSketch>(m, "Sketch")
      .def(py::init([](std::size_t k, double eps, const std::string& fn, std::uint64_t seed, SketchOptions options) {
             return SamplerSketch(k, eps, spec_from_name(fn), seed, options);
           }),
           py::arg("k"), py::arg("eps") = 0.5, py::arg("fn") = "sqrt", py::arg("seed") = 1,
           py::arg("options") = SketchOptions{})
      .def("process", [](SamplerSketch& s, const std::string& key, double val) { s.process({key, val}); },
           py::arg("key"), py::arg("val") = 1.0)
      .def("update",
           [](SamplerSketch& s, const Pairs& items) {
             for (const auto& [key, val] : items) s.process({key, val});
           },
           py::arg("items"), "Processes (key, value) pairs in order.")
      .def("merge", [](SamplerSketch& s, const SamplerSketch& o) { s.merge(o); }, py::arg("other"))
      .def("sample", &produce_sample)
      .def("size",
           [](const SamplerSketch& s) {
             const SketchSize z = s.size();
             return py::make_tuple(z.distinct_keys, z.stored_elements);
           })
      .def_property_readonly("k", &SamplerSketch::k)
      .def_property_readonly("eps", &SamplerSketch::eps)
      .def_property_readonly("r", &SamplerSketch::r)
      .def_property_readonly("sum", &SamplerSketch::sum)
      .def_property_readonly("gamma", &SamplerSketch::gamma)
      .def_property_readonly("fn", [](const SamplerSketch& s) { return s.spec().name(); })
      .def_property_readonly("sideline_size", [](const SamplerSketch& s) { return s.sideline().size(); })
      .def("to_json", [](const SamplerSketch& s) { return to_json(s).dump(); })
      .def_static("from_json", [](const std::string& text) { return sketch_from_json(json::parse(text)); })
      .def("__copy__", [](const SamplerSketch& s) { return SamplerSketch(s); })
      .def(py::self == py::self);

  m.def(
      "estimate",
      [](const FinalSample& sample, const Pairs& elements, const std::string& fn,
         std::optional<std::function<double(const std::string&)>> weight) {
        FreqCollector freqs(sample);
        for (const auto& [key, val] : elements) freqs.process({key, val});
        const FunctionSpec spec = spec_from_name(fn);
        const Estimate est = weight ? sum_estimate(sample, freqs, *weight, spec) : sum_estimate(sample, freqs, spec);
        return py::make_tuple(est.value, est.per_key);
      },
      py::arg("sample"), py::arg("elements"), py::arg("fn"), py::arg("weight") = py::none(),
      "Second pass over the elements; returns (sum estimate, per-key estimates).");

  m.def("seed_cdf", [](double w, double t, const std::string& fn, double gamma, std::uint32_t r) {
    return seed_cdf(w, t, spec_from_name(fn), gamma, r);
  }, py::arg("w"), py::arg("t"), py::arg("fn"), py::arg("gamma"), py::arg("r"));

  m.def("nrmse_bound", &nrmse_bound, py::arg("k"), py::arg("eps") = 0.5);
  m.def("replica_count", &replica_count, py::arg("k"), py::arg("eps"));

  m.def("zipf_stream", [](double alpha, std::size_t n, std::uint64_t seed) { return to_pairs(zipf_stream(alpha, n, seed)); },
        py::arg("alpha"), py::arg("n"), py::arg("seed") = 1);
  m.def("read_elements", [](const std::string& path) { return to_pairs(read_elements(path)); }, py::arg("path"));

  m.def(
      "experiment",
      [](const std::string& source, const std::string& fn, std::vector<std::size_t> ks, double eps, std::size_t reps,
         std::uint64_t seed, bool track_size, SketchOptions options) {
        ExperimentConfig cfg;
        cfg.source = source;
        cfg.spec_name = fn;
        cfg.ks = std::move(ks);
        cfg.eps = eps;
        cfg.reps = reps;
        cfg.seed = seed;
        cfg.track_size = track_size;
        cfg.options = options;
        ExperimentReport report;
        {
          py::gil_scoped_release release;
          report = run_experiment(cfg);
        }
        return to_json(report).dump();
      },
      py::arg("source"), py::arg("fn") = "sqrt", py::arg("ks") = std::vector<std::size_t>{25}, py::arg("eps") = 0.5,
      py::arg("reps") = 200, py::arg("seed") = 1, py::arg("track_size") = false, py::arg("options") = SketchOptions{},
      "Runs the repetition harness; returns the report as a JSON string.");
}
