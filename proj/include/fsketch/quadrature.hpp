#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string_view>

#include "fsketch/error.hpp"

namespace fsketch::quad {

inline constexpr double kRelTol = 1e-8;
inline constexpr double kAbsFloor = 1e-12;

namespace detail {

struct Piece {
  double value;
  double error;
  double l1;
};

template <class F>
Piece gk(F& f, double a, double b, unsigned depth = 15) {
  Piece p{0.0, 0.0, 0.0};
  p.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, depth, kRelTol * 0.1, &p.error,
                                                                           &p.l1);
  return p;
}

// `scale` is the L1 norm of the whole integral so far; pieces far below it
// only need an absolute error that is small against it.
inline bool accurate(const Piece& p, double scale) {
  return std::isfinite(p.value) && p.error <= std::max({kAbsFloor, kRelTol * std::abs(p.l1), 1e-2 * kRelTol * scale});
}

inline double check(const Piece& p, double a, double b, std::string_view what) {
  const double allowed = std::max(kAbsFloor, kRelTol * std::abs(p.l1));
  if (!std::isfinite(p.value) || p.error > allowed) {
    std::ostringstream msg;
    msg << "quadrature did not converge for " << what << " on [" << a << ", " << b
        << "]: value=" << p.value << " error=" << p.error << " allowed=" << allowed;
    throw Error(ErrorKind::kNumericFailure, msg.str());
  }
  return p.value;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (61-point, Boost.Math) on [a, b]; b may be +inf.
/// Throws numeric-failure when the error estimate stays above
/// max(kAbsFloor, kRelTol * |L1|).
template <class F>
double integrate(F&& f, double a, double b, std::string_view what) {
  if (a == b) return 0.0;
  return detail::check(detail::gk(f, a, b), a, b, what);
}

/// Same on [0, b] with b finite, for integrands that are bounded but not
/// smooth at 0 (e.g. g(s^q)). The range is cut at b/2, b/4, ... so that every
/// piece sees a smooth integrand. A single 61-point rule is tried first on each
/// piece; the adaptive error estimate of Boost is too pessimistic on the tiny
/// pieces near 0, where it stalls at round-off.
template <class F>
double integrate_graded(F&& f, double b, std::string_view what) {
  if (b == 0.0) return 0.0;
  detail::Piece total{0.0, 0.0, 0.0};
  double hi = b;
  for (int j = 0; j < 60; ++j) {
    const double lo = hi * 0.5;
    detail::Piece p = detail::gk(f, lo, hi, 0);
    if (!detail::accurate(p, total.l1 + std::abs(p.l1))) p = detail::gk(f, lo, hi);
    total.value += p.value;
    total.error += p.error;
    total.l1 += p.l1;
    hi = lo;
    // The integrand is bounded, so what is left is below ~ the last piece.
    if (std::abs(p.l1) <= 1e-12 * std::abs(total.l1)) break;
  }
  const double rest = f(hi * 0.5) * hi;
  total.value += rest;
  total.error += std::abs(rest);
  total.l1 += std::abs(rest);
  return detail::check(total, 0.0, b, what);
}

}  // namespace fsketch::quad
