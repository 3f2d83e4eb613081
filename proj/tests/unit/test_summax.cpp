#include <doctest.h>

#include "fsketch/error.hpp"
#include "fsketch/summax.hpp"
#include "support.hpp"

using namespace fsketch;

TEST_CASE("seed is Exp[SUMMAX] over hash seeds") {
  // SUMMAX(p) = max(1, 3) + 2 = 5; q has SUMMAX 0.5.
  std::vector<double> seeds;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    SumMaxSketch sk(2, ExpHash(s));
    sk.process({"p", 0}, 1.0);
    sk.process({"q", 0}, 0.5);
    sk.process({"p", 1}, 2.0);
    sk.process({"p", 0}, 3.0);
    seeds.push_back(*sk.sample().find("p"));
  }
  const double d = oracle::ks_statistic(seeds, [](double t) { return -std::expm1(-5.0 * t); });
  CHECK(d < oracle::ks_critical(seeds.size()));
}

TEST_CASE("scores are deterministic and order-free") {
  SumMaxSketch a(3, ExpHash(1)), b(3, ExpHash(1));
  a.process({"x", 1}, 2.0);
  a.process({"y", 4}, 1.0);
  b.process({"y", 4}, 1.0);
  b.process({"x", 1}, 2.0);
  CHECK(a.sample() == b.sample());
  CHECK(*a.sample().find("x") == doctest::Approx(ExpHash(1)("x", 1) / 2.0));
}

TEST_CASE("errors") {
  SumMaxSketch a(3, ExpHash(1)), b(3, ExpHash(2));
  CHECK_THROWS_AS(a.process({"x", 0}, 0.0), Error);
  try {
    a.merge(b);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIncompatibleSketch);
  }
}

TEST_CASE("merge equals processing the union") {
  SumMaxSketch whole(4, ExpHash(3)), left(4, ExpHash(3)), right(4, ExpHash(3));
  for (int i = 0; i < 200; ++i) {
    const StructuredKey key{"p" + std::to_string(i % 17), static_cast<std::uint64_t>(i % 5)};
    const double v = 1.0 + i % 7;
    whole.process(key, v);
    (i % 2 ? left : right).process(key, v);
  }
  CHECK(SumMaxSketch::merge(left, right).sample() == whole.sample());
}
