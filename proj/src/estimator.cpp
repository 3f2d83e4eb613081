#include "fsketch/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fsketch/error.hpp"
#include "fsketch/quadrature.hpp"

namespace fsketch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1 - exp(-x) without cancellation.
double one_minus_exp(double x) { return -std::expm1(-x); }

// Integral over y >= gamma of w e^{-wy} (1 - e^{-A(y) c}) dy, c = t / r.
double tail_mass(double w, double c, const FunctionSpec& spec, double gamma) {
  std::vector<double> cuts;
  for (const Atom& atom : spec.atoms())
    if (atom.location > gamma) cuts.push_back(atom.location);
  std::sort(cuts.begin(), cuts.end());

  if (!spec.has_density()) {
    // A is a step function: constant on (cut[j-1], cut[j]], zero past the last atom.
    double total = 0.0;
    double lo = gamma;
    for (double hi : cuts) {
      const double a = spec.A(hi);
      total += (std::exp(-w * lo) - std::exp(-w * hi)) * one_minus_exp(a * c);
      lo = hi;
    }
    return total;
  }

  // y = gamma + s / w; the factor e^{-w gamma} is pulled out of the integral.
  auto g = [&](double s) {
    const double y = gamma + s / w;
    return std::exp(-s) * one_minus_exp(spec.A(y) * c);
  };
  double total = 0.0;
  double lo = 0.0;
  for (double cut : cuts) {
    const double hi = (cut - gamma) * w;
    if (hi > lo) total += quad::integrate(g, lo, hi, spec.name() + " seed cdf tail");
    lo = std::max(lo, hi);
  }
  total += quad::integrate(g, lo, kInf, spec.name() + " seed cdf tail");
  return std::exp(-w * gamma) * total;
}

}  // namespace

double seed_cdf(double w, double t, const FunctionSpec& spec, double gamma, std::uint32_t r) {
  if (!(w > 0.0) || !std::isfinite(w) || !(t > 0.0) || !(gamma > 0.0) || !std::isfinite(gamma) || r == 0) {
    throw Error(ErrorKind::kInvalidParameter, "seed_cdf needs w, t, gamma > 0 and r >= 1");
  }
  if (std::isinf(t)) return 1.0;
  const double c = t / static_cast<double>(r);
  // q = 1 - p2, computed directly so that p2^r keeps its precision when p2 ~ 1.
  const double q = one_minus_exp(w * gamma) * one_minus_exp(spec.A(gamma) * c) + tail_mass(w, c, spec, gamma);
  const double log_p2 = q >= 1.0 ? -kInf : std::log1p(-q);
  const double p = -std::expm1(-w * spec.B(gamma) * t + static_cast<double>(r) * log_p2);
  return std::clamp(p, 0.0, 1.0);
}

double per_key_estimate(double nu, double tau, const FunctionSpec& spec, double gamma, std::uint32_t r) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw Error(ErrorKind::kInvalidParameter, "frequency must be positive");
  const double f = spec.f(nu);
  if (std::isinf(tau)) return f;
  const double p = seed_cdf(nu, tau, spec, gamma, r);
  if (!(p > 0.0)) throw Error(ErrorKind::kNumericFailure, "inclusion probability evaluated to 0");
  return f / p;
}

FreqCollector::FreqCollector(const std::vector<std::string>& targets) {
  for (const auto& key : targets) sums_.emplace(key, 0.0);
}

FreqCollector::FreqCollector(const FinalSample& sample) {
  for (const auto& e : sample.sampled()) sums_.emplace(e.key, 0.0);
}

void FreqCollector::process(const Element& e) {
  if (auto it = sums_.find(e.key); it != sums_.end()) it->second += e.val;
}

void FreqCollector::merge(const FreqCollector& other) {
  for (const auto& [key, v] : other.sums_) sums_[key] += v;
}

std::optional<double> FreqCollector::frequency(const std::string& key) const {
  if (auto it = sums_.find(key); it != sums_.end()) return it->second;
  return std::nullopt;
}

Estimate sum_estimate(const FinalSample& sample, const FreqCollector& freqs, const KeyWeights& L,
                      const FunctionSpec& spec) {
  if (!sample.params.spec_name.empty() && sample.params.spec_name != spec.name()) {
    throw Error(ErrorKind::kIncompatibleSketch,
                "sample was built for '" + sample.params.spec_name + "', not '" + spec.name() + "'");
  }
  Estimate out;
  for (const auto& e : sample.sampled()) {
    const double weight = L ? L(e.key) : 1.0;
    if (weight == 0.0) continue;
    const auto nu = freqs.frequency(e.key);
    if (!nu || !(*nu > 0.0)) {
      throw Error(ErrorKind::kIncompleteSecondPass, "no frequency collected for sampled key '" + e.key + "'");
    }
    const double fhat = per_key_estimate(*nu, sample.tau, spec, sample.gamma, sample.params.r);
    out.per_key[e.key] = fhat;
    out.value += weight * fhat;
  }
  return out;
}

Estimate sum_estimate(const FinalSample& sample, const FreqCollector& freqs, const FunctionSpec& spec) {
  return sum_estimate(sample, freqs, KeyWeights{}, spec);
}

}  // namespace fsketch
