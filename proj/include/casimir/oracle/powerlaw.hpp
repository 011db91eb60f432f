#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace casimir::oracle {

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
};

/// Least-squares power-law fit value = prefactor * z^exponent, done in
/// log-log coordinates. Needs at least 4 points spanning a decade.
inline PowerLawFit fit_power_law(
    std::span<const std::pair<double, double>> points) {
  if (points.size() < 4)
    throw std::invalid_argument("fit_power_law: need at least 4 points");
  double zmin = points[0].first, zmax = points[0].first;
  for (const auto& [z, v] : points) {
    if (!(z > 0.0) || !(v > 0.0))
      throw std::domain_error("fit_power_law: points must be positive");
    zmin = std::min(zmin, z);
    zmax = std::max(zmax, z);
  }
  if (zmax < 10.0 * zmin)
    throw std::invalid_argument("fit_power_law: points must span a decade");

  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& [z, v] : points) {
    const double x = std::log(z);
    const double y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double denom = n * sxx - sx * sx;
  PowerLawFit fit;
  fit.exponent = (n * sxy - sx * sy) / denom;
  fit.prefactor = std::exp((sy - fit.exponent * sx) / n);
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0.0;
  for (const auto& [z, v] : points) {
    const double r = std::log(v) -
                     (std::log(fit.prefactor) + fit.exponent * std::log(z));
    ss_res += r * r;
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace casimir::oracle
