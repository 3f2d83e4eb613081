#include "fsketch/transforms.hpp"

#include <boost/math/special_functions/expint.hpp>

#include <algorithm>
#include <charconv>
#include <cerrno>
#include <cmath>
#include <cstdlib>

#include "fsketch/error.hpp"
#include "fsketch/quadrature.hpp"

namespace fsketch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double atoms_upper(std::span<const Atom> atoms, double gamma) {
  double s = 0.0;
  for (const Atom& a : atoms)
    if (a.location >= gamma) s += a.mass;
  return s;
}

double atoms_lower(std::span<const Atom> atoms, double gamma) {
  double s = 0.0;
  for (const Atom& a : atoms)
    if (a.location < gamma) s += a.mass * a.location;
  return s;
}

double parse_number(std::string_view text, std::string_view name) {
  const std::string buf(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size() || errno == ERANGE) {
    throw Error(ErrorKind::kInvalidParameter, "malformed parameter in function name '" + std::string(name) + "'");
  }
  return v;
}

// Shortest text that parses back to v, so names round-trip through the registry.
std::string format_param(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

FunctionSpec::FunctionSpec(Parts parts) {
  if (!parts.f) throw Error(ErrorKind::kInvalidParameter, "function spec requires f");
  if (!parts.density && parts.atoms.empty()) {
    throw Error(ErrorKind::kInvalidParameter, "function spec requires a density or atoms");
  }
  for (const Atom& a : parts.atoms) {
    if (!(a.location > 0.0) || !(a.mass > 0.0)) {
      throw Error(ErrorKind::kInvalidParameter, "atoms need positive location and mass");
    }
  }
  impl_ = std::make_shared<const Parts>(std::move(parts));
}

FunctionSpec FunctionSpec::custom(std::string name, Fn f, Fn density, std::vector<Atom> atoms) {
  Parts parts;
  parts.name = std::move(name);
  parts.f = std::move(f);
  parts.density = std::move(density);
  parts.atoms = std::move(atoms);
  return FunctionSpec(std::move(parts));
}

double FunctionSpec::A(double gamma) const {
  if (impl_->upper_mass) return impl_->upper_mass(gamma);
  if (gamma >= kInf) return 0.0;
  double total = atoms_upper(impl_->atoms, gamma);
  if (impl_->density) {
    const auto& a = impl_->density;
    total += quad::integrate([&](double t) { return a(t); }, gamma, kInf, impl_->name + " A(gamma)");
  }
  return total;
}

double FunctionSpec::B(double gamma) const {
  if (impl_->lower_moment) return impl_->lower_moment(gamma);
  double total = atoms_lower(impl_->atoms, gamma);
  if (impl_->density && gamma > 0.0) {
    const auto& a = impl_->density;
    total += quad::integrate([&](double t) { return t > 0.0 ? t * a(t) : 0.0; }, 0.0, gamma,
                             impl_->name + " B(gamma)");
  }
  return total;
}

FunctionSpec make_moment(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::kInvalidParameter, "moment exponent must lie in (0, 1)");
  }
  const double g = std::tgamma(1.0 - p);
  FunctionSpec::Parts parts;
  parts.name = p == 0.5 ? "sqrt" : "moment:" + format_param(p);
  parts.f = [p](double nu) { return nu <= 0.0 ? 0.0 : std::pow(nu, p); };
  parts.density = [p, g](double t) { return p * std::pow(t, -1.0 - p) / g; };
  parts.upper_mass = [p, g](double gamma) {
    if (gamma <= 0.0) return kInf;
    if (gamma >= kInf) return 0.0;
    return p == 0.5 ? 1.0 / (std::sqrt(gamma) * g) : std::pow(gamma, -p) / g;
  };
  parts.lower_moment = [p, g](double gamma) {
    if (gamma <= 0.0) return 0.0;
    return p * std::pow(gamma, 1.0 - p) / ((1.0 - p) * g);
  };
  parts.power_law = FunctionSpec::PowerLaw{p, [p, g](double) { return p / g; }};
  return FunctionSpec(std::move(parts));
}

FunctionSpec make_log() {
  FunctionSpec::Parts parts;
  parts.name = "log1p";
  parts.f = [](double nu) { return nu <= 0.0 ? 0.0 : std::log1p(nu); };
  parts.density = [](double t) { return std::exp(-t) / t; };
  parts.upper_mass = [](double gamma) {
    if (gamma <= 0.0) return kInf;
    if (gamma >= kInf) return 0.0;
    return boost::math::expint(1, gamma);
  };
  parts.lower_moment = [](double gamma) { return gamma <= 0.0 ? 0.0 : -std::expm1(-gamma); };
  return FunctionSpec(std::move(parts));
}

FunctionSpec make_soft_cap(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw Error(ErrorKind::kInvalidParameter, "soft cap T must be positive");
  }
  FunctionSpec::Parts parts;
  parts.name = "softcap:" + format_param(T);
  parts.f = [T](double nu) { return nu <= 0.0 ? 0.0 : -T * std::expm1(-nu / T); };
  parts.atoms = {Atom{1.0 / T, T}};
  const double loc = 1.0 / T;
  parts.upper_mass = [T, loc](double gamma) { return gamma <= loc ? T : 0.0; };
  parts.lower_moment = [loc](double gamma) { return gamma > loc ? 1.0 : 0.0; };
  return FunctionSpec(std::move(parts));
}

FunctionSpec spec_from_name(std::string_view name) {
  if (name == "sqrt") return make_moment(0.5);
  if (name == "log1p" || name == "log") return make_log();
  const auto colon = name.find(':');
  if (colon != std::string_view::npos) {
    const auto family = name.substr(0, colon);
    const double param = parse_number(name.substr(colon + 1), name);
    if (family == "moment") return make_moment(param);
    if (family == "softcap") return make_soft_cap(param);
  }
  throw Error(ErrorKind::kInvalidParameter,
              "unknown function '" + std::string(name) + "' (expected sqrt, moment:p, log1p, softcap:T)");
}

double laplace_c(const FunctionSpec& spec, double nu, double lo, double hi) {
  if (!(nu >= 0.0) || !(lo >= 0.0) || !(hi >= lo)) {
    throw Error(ErrorKind::kInvalidParameter, "laplace_c requires nu >= 0 and 0 <= lo <= hi");
  }
  if (nu == 0.0 || lo == hi) return 0.0;

  double total = 0.0;
  for (const Atom& a : spec.atoms()) {
    if (a.location >= lo && a.location < hi) total += a.mass * -std::expm1(-nu * a.location);
  }
  if (!spec.has_density()) return total;

  const double pivot = std::clamp(1.0 / nu, lo, hi);
  const std::string what = spec.name() + " laplace_c";

  if (const auto& law = spec.power_law()) {
    const double p = law->exponent;
    const auto& b = law->scaled_density;
    // Below the pivot: s = t^(1-p), dt = t^p/(1-p) ds, a(t) t^p = b(t)/t.
    auto low = [&](double s) {
      const double t = std::pow(s, 1.0 / (1.0 - p));
      if (t <= 0.0) return b(0.0) * nu / (1.0 - p);
      return b(t) * (-std::expm1(-nu * t)) / t / (1.0 - p);
    };
    // Above the pivot: s = t^(-p), |dt/ds| = t^(1+p)/p, a(t) t^(1+p) = b(t).
    auto high = [&](double s) {
      const double t = std::pow(s, -1.0 / p);
      if (!std::isfinite(t)) return b(kInf) / p;
      return b(t) * (-std::expm1(-nu * t)) / p;
    };
    if (lo == 0.0) {
      total += quad::integrate_graded(low, std::pow(pivot, 1.0 - p), what);
    } else {
      total += quad::integrate(low, std::pow(lo, 1.0 - p), std::pow(pivot, 1.0 - p), what);
    }
    const double s_hi = hi >= kInf ? 0.0 : std::pow(hi, -p);
    total += quad::integrate(high, s_hi, std::pow(pivot, -p), what);
    return total;
  }

  auto g = [&](double t) {
    if (t <= 0.0) return 0.0;
    return spec.density(t) * -std::expm1(-nu * t);
  };
  total += quad::integrate(g, lo, pivot, what);
  total += quad::integrate(g, pivot, hi, what);
  return total;
}

}  // namespace fsketch
