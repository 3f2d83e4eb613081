#include <doctest.h>

#include <random>

#include "fsketch/error.hpp"
#include "fsketch/final_sample.hpp"
#include "fsketch/sampler.hpp"

using namespace fsketch;

namespace {

constexpr SketchOptions kPlain{false, false};

SamplerSketch make(std::size_t k, double eps, const std::string& fn, SketchOptions opts = {}, std::uint64_t seed = 1) {
  return SamplerSketch(k, eps, spec_from_name(fn), RandomSource(seed), ExpHash(seed + 1000), opts);
}

std::vector<Element> zipfish(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Element> out;
  for (std::size_t i = 0; i < n; ++i) {
    const int key = static_cast<int>(std::pow(u(gen), -1.5));
    out.push_back({std::to_string(key), 1.0});
  }
  return out;
}

}  // namespace

TEST_CASE("parameters") {
  CHECK(make(25, 0.5, "sqrt").r() == 50);
  CHECK(make(3, 0.5, "sqrt").r() == 6);
  CHECK(make(10, 0.3, "sqrt").r() == 34);
  CHECK(make(3, 0.1, "sqrt").r() == 30);
  CHECK_THROWS_AS(make(3, 0.6, "sqrt"), Error);
  CHECK_THROWS_AS(make(2, 0.5, "sqrt"), Error);
  CHECK_THROWS_AS(make(3, 0.0, "sqrt"), Error);
  const SamplerSketch s = make(3, 0.5, "sqrt");
  CHECK(std::isinf(s.gamma()));
  CHECK(s.size() == SketchSize{0, 0});
}

TEST_CASE("first and second element trace") {
  const std::uint64_t seed = 11;
  SamplerSketch s = make(3, 0.5, "log1p", kPlain, seed);
  const FunctionSpec spec = make_log();
  const ExpHash h(seed + 1000);

  RandomSource oracle(seed);
  const double pp_seed = oracle.exponential(1.0);
  std::vector<double> y(6);
  for (auto& v : y) v = oracle.exponential(1.0);

  s.process({"a", 1.0});
  CHECK(s.sum() == 1.0);
  CHECK(s.gamma() == 1.0);
  CHECK(*s.ppswor().sample().find("a") == pp_seed);
  double best = std::numeric_limits<double>::infinity();
  std::size_t below = 0;
  for (std::uint32_t i = 0; i < 6; ++i) {
    if (y[i] < 1.0) {
      ++below;
      REQUIRE(s.sideline().find("a", i) != nullptr);
      CHECK(s.sideline().find("a", i)->value == y[i]);
    } else {
      CHECK(s.sideline().find("a", i) == nullptr);
      best = std::min(best, h("a", i) / spec.A(y[i]));
    }
  }
  CHECK(s.sideline().size() == below);
  if (std::isfinite(best)) {
    CHECK(*s.summax().sample().find("a") == best);
  } else {
    CHECK(s.summax().sample().empty());
  }

  s.process({"a", 1.0});
  CHECK(s.gamma() == 0.5);
  s.sideline().for_each([&](const std::string&, const Sideline::Slot& slot) { CHECK(slot.value < 0.5); });
  const SketchSize size = s.size();
  CHECK(size.distinct_keys == 1);
  CHECK(size.stored_elements <= 2 + s.sideline().size());
}

TEST_CASE("zero upper mass is never sent to SumMax") {
  // Atom at 1/T = 0.01: every draw >= gamma (>= 0.01 here) has A = 0.
  SamplerSketch s = make(3, 0.5, "softcap:100", kPlain, 5);
  for (int i = 0; i < 50; ++i) s.process({"k" + std::to_string(i % 4), 1.0});
  CHECK(s.gamma() == doctest::Approx(0.02));
  CHECK(s.summax().sample().empty());
}

TEST_CASE("gamma and flush invariants") {
  for (SketchOptions opts : {kPlain, SketchOptions{}}) {
    SamplerSketch s = make(5, 0.5, "sqrt", opts, 3);
    double last = s.gamma();
    for (const auto& e : zipfish(3000, 4)) {
      s.process(e);
      CHECK(std::abs(s.gamma() * s.sum() - 1.0) <= 2.0 * std::numeric_limits<double>::epsilon());
      CHECK(s.gamma() <= last);
      last = s.gamma();
      CHECK(s.sideline().max_value() < s.gamma());
    }
  }
}

TEST_CASE("invalid elements") {
  SamplerSketch s = make(3, 0.5, "sqrt");
  CHECK_THROWS_AS(s.process({"a", 0.0}), Error);
  CHECK_THROWS_AS(s.process({"a", -2.0}), Error);
  CHECK(s.empty());
}

TEST_CASE("merge basics") {
  SamplerSketch a = make(4, 0.5, "sqrt", {}, 1);
  for (int i = 0; i < 40; ++i) a.process({"k" + std::to_string(i % 9), 1.0});
  SamplerSketch fresh = make(4, 0.5, "sqrt", {}, 1);
  SamplerSketch merged = SamplerSketch::merge(a, fresh);
  CHECK(merged == a);

  SamplerSketch b = make(4, 0.5, "sqrt", {}, 2);
  CHECK_THROWS_AS(a.merge(b), Error);  // different hash seed
  SamplerSketch c(4, 0.5, make_moment(0.5), RandomSource(9), a.hash(), {});
  for (int i = 0; i < 10; ++i) c.process({"z", 2.0});
  const double ga = a.gamma(), gc = c.gamma();
  a.merge(c);
  CHECK(a.gamma() < std::min(ga, gc));
  CHECK(a.sum() == 60.0);
  CHECK_THROWS_AS(a.merge(make(4, 0.5, "log1p", {}, 1)), Error);
  CHECK_THROWS_AS(a.merge(make(4, 0.5, "sqrt", kPlain, 1)), Error);
}

TEST_CASE("partitioned replay reproduces the canonical parts") {
  const auto stream = zipfish(2000, 8);
  const RandomSource master(21);
  const ExpHash hash(99);
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    SamplerSketch whole(6, 0.5, make_moment(0.5), master, hash, kPlain);
    std::vector<SamplerSketch> parts(2, whole);
    std::uniform_int_distribution<int> pick(0, 1);
    for (std::size_t i = 0; i < stream.size(); ++i) {
      RandomSource r = master.stream(i);
      whole.process(stream[i], r);
      RandomSource r2 = master.stream(i);
      parts[pick(gen)].process(stream[i], r2);
    }
    const SamplerSketch merged = SamplerSketch::merge(parts[0], parts[1]);
    CHECK(merged.sum() == whole.sum());
    CHECK(merged.ppswor().sample() == whole.ppswor().sample());
    CHECK(merged.sideline() == whole.sideline());
    CHECK(produce_sample(merged) == produce_sample(whole));
  }
}

TEST_CASE("optimizations do not change the final sample") {
  const auto stream = zipfish(5000, 12);
  for (const char* fn : {"sqrt", "log1p", "softcap:50", "moment:0.2"}) {
    for (std::uint64_t seed : {1, 2, 3}) {
      SamplerSketch on = make(5, 0.5, fn, {}, seed);
      SamplerSketch off = make(5, 0.5, fn, kPlain, seed);
      for (const auto& e : stream) {
        on.process(e);
        off.process(e);
      }
      CHECK_MESSAGE(produce_sample(on) == produce_sample(off), fn, " seed ", seed);
      CHECK(on.size().stored_elements <= off.size().stored_elements);
    }
  }
}

TEST_CASE("size accounting") {
  SamplerSketch s = make(3, 0.5, "sqrt", kPlain, 2);
  s.process({"a", 1.0});
  const SketchSize size = s.size();
  CHECK(size.distinct_keys == 1);
  CHECK(size.stored_elements ==
        s.ppswor().sample().size() + s.summax().sample().size() + s.sideline().size());
  const std::uint64_t v = s.version();
  CHECK(s.size() == size);
  CHECK(s.version() == v);
}
