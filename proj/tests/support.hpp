#pragma once

// Oracles shared by the unit and acceptance tests. Nothing here calls into the
// library's own quadrature or closed forms.

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace oracle {

// Double-exponential quadrature on [a, b] (b may be +inf).
// Integrable endpoint singularities are tolerated: points where the integrand
// overflows are dropped.
inline double integrate(const std::function<double(double)>& f0, double a, double b) {
  auto f = [&](double t) {
    const double v = f0(t);
    return std::isfinite(v) ? v : 0.0;
  };
  boost::math::quadrature::tanh_sinh<double> ts(15);
  if (std::isinf(b)) {
    // tanh_sinh handles [a, inf) natively.
    return ts.integrate(f, a, std::numeric_limits<double>::infinity());
  }
  return ts.integrate(f, a, b);
}

// Complement Laplace transform by brute force, split at t = 1/nu.
inline double laplace_c(const std::function<double(double)>& a, double nu) {
  auto g = [&](double t) { return t <= 0.0 ? 0.0 : a(t) * -std::expm1(-nu * t); };
  const double pivot = 1.0 / nu;
  return integrate(g, 0.0, pivot) + integrate(g, pivot, std::numeric_limits<double>::infinity());
}

// sup |F_n - F| of a sample against a continuous CDF.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

// Two-sample statistic sup |F_a - F_b|.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

// Asymptotic Kolmogorov critical value at alpha = 0.01.
constexpr double kKs01 = 1.6276;
inline double ks_critical(std::size_t n) { return kKs01 / std::sqrt(static_cast<double>(n)); }
inline double ks_critical(std::size_t n, std::size_t m) {
  return kKs01 * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * static_cast<double>(m)));
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  double se = 0.0;  // standard error of the mean
};

inline Moments moments(const std::vector<double>& xs) {
  Moments m;
  const double n = static_cast<double>(xs.size());
  m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.var = ss / (n - 1.0);
  m.se = std::sqrt(m.var / n);
  return m;
}

}  // namespace oracle
