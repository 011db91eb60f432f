#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace casimir::quad {

/// Map t in (0,1) to v in (0,inf) via v = mu*t/(1-t). Returns {v, jacobian}
/// with jacobian = mu/(1-t)^2.
inline std::pair<double, double> map_semiinfinite(double t, double mu) {
  if (!(t > 0.0) || !(t < 1.0))
    throw std::domain_error("map_semiinfinite: t must lie in (0,1)");
  if (!(mu > 0.0))
    throw std::domain_error("map_semiinfinite: mu must be positive");
  const double om = 1.0 - t;
  return {mu * t / om, mu / (om * om)};
}

/// Inverse of map_semiinfinite: t = v/(mu+v).
inline double map_semiinfinite_inverse(double v, double mu) {
  if (!(v >= 0.0)) throw std::domain_error("map_semiinfinite_inverse: v must be >= 0");
  if (!(mu > 0.0)) throw std::domain_error("map_semiinfinite_inverse: mu must be positive");
  return v / (mu + v);
}

/// Per-dimension map descriptor. Carried in QuadSpec so run manifests can
/// record how the unit cube was stretched onto physical coordinates.
struct Transform {
  enum class Family { SemiInfinite, Angle, Affine };
  Family family = Family::SemiInfinite;
  double mu = 1.0;  ///< scale of the semi-infinite map
  double a = 0.0;   ///< lower bound (Affine)
  double b = 1.0;   ///< upper bound (Affine)

  /// Apply the map; returns {value, jacobian}.
  std::pair<double, double> operator()(double t) const {
    switch (family) {
      case Family::SemiInfinite:
        return map_semiinfinite(t, mu);
      case Family::Angle:
        return {2.0 * std::numbers::pi * t, 2.0 * std::numbers::pi};
      case Family::Affine:
        return {a + (b - a) * t, b - a};
    }
    throw std::logic_error("Transform: unknown family");
  }

  std::string family_name() const {
    switch (family) {
      case Family::SemiInfinite: return "semi_infinite";
      case Family::Angle: return "angle";
      case Family::Affine: return "affine";
    }
    return "?";
  }

  static Transform semi_infinite(double mu) {
    return Transform{Family::SemiInfinite, mu, 0.0, 1.0};
  }
  static Transform angle() { return Transform{Family::Angle, 1.0, 0.0, 1.0}; }
  static Transform affine(double a, double b) {
    return Transform{Family::Affine, 1.0, a, b};
  }
};

}  // namespace casimir::quad
