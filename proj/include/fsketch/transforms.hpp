#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fsketch {

/// Point mass of the inverse complement-Laplace transform.
struct Atom {
  double location;  // t0 > 0
  double mass;      // > 0
};

/// A soft concave sublinear function f packaged with its transform data:
///
///   f(v)  = integral_0^inf a(t) (1 - exp(-v t)) dt  (+ atom terms)
///   A(g)  = integral_g^inf a(t) dt                 (atoms with t0 >= g)
///   B(g)  = integral_0^g t a(t) dt                 (atoms with t0 <  g)
///
/// The sketch and estimator only ever call f, A and B. Registered families
/// carry closed forms; `custom` specs evaluate A and B by quadrature.
/// Immutable and cheap to copy.
class FunctionSpec {
 public:
  using Fn = std::function<double(double)>;

  /// a(t) = b(t) * t^(-1-p) with b bounded. Quadrature then works in the
  /// variables t^(1-p) below the pivot and t^(-p) above it, where the
  /// integrands are bounded.
  struct PowerLaw {
    double exponent;
    Fn scaled_density;  // b(t) = a(t) * t^(1+p)
  };

  struct Parts {
    std::string name;
    Fn f;
    Fn density;                 // a(t); empty when the transform is atoms only
    std::vector<Atom> atoms;
    Fn upper_mass;              // A(gamma); optional for custom specs
    Fn lower_moment;            // B(gamma); optional for custom specs
    std::optional<PowerLaw> power_law;
  };

  explicit FunctionSpec(Parts parts);

  /// Density/atoms supplied by the caller; A and B fall back to quadrature.
  static FunctionSpec custom(std::string name, Fn f, Fn density, std::vector<Atom> atoms = {});

  const std::string& name() const noexcept { return impl_->name; }
  double f(double nu) const { return impl_->f(nu); }
  double A(double gamma) const;
  double B(double gamma) const;

  bool has_density() const noexcept { return static_cast<bool>(impl_->density); }
  double density(double t) const { return impl_->density ? impl_->density(t) : 0.0; }
  std::span<const Atom> atoms() const noexcept { return impl_->atoms; }
  const std::optional<PowerLaw>& power_law() const noexcept { return impl_->power_law; }

  friend bool operator==(const FunctionSpec& a, const FunctionSpec& b) noexcept {
    return a.impl_ == b.impl_ || a.name() == b.name();
  }

 private:
  std::shared_ptr<const Parts> impl_;
};

/// f(v) = v^p for 0 < p < 1.
FunctionSpec make_moment(double p);
/// f(v) = ln(1 + v).
FunctionSpec make_log();
/// Soft cap T(1 - exp(-v/T)): a single atom of mass T at t = 1/T.
FunctionSpec make_soft_cap(double T);

/// Registry lookup: "sqrt", "moment:<p>", "log1p", "softcap:<T>".
FunctionSpec spec_from_name(std::string_view name);

/// Range-restricted transform integral_lo^hi a(t)(1 - exp(-v t)) dt plus the
/// atoms with lo <= t0 < hi. `hi` may be +inf.
double laplace_c(const FunctionSpec& spec, double nu, double lo,
                 double hi = std::numeric_limits<double>::infinity());

}  // namespace fsketch
