#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace casimir {

/// Unit convention used throughout: c = hbar = omega_A = alpha(0) = 1, so the
/// resonance wavelength is lambda_A = 2*pi. Every exported observable is a
/// dimensionless ratio, so results do not depend on this choice.
struct InternalUnits {
  static constexpr double c = 1.0;
  static constexpr double hbar = 1.0;
  static constexpr double omega_a = 1.0;
  static constexpr double alpha0 = 1.0;
  static constexpr double lambda_a = 2.0 * std::numbers::pi;
};

/// Physical inputs for an atom above a dilute disordered dielectric
/// half-space, in internal units.
struct ModelParams {
  double alpha0 = 1.0;        ///< static atomic polarizability
  double omega_a = 1.0;       ///< atomic resonance frequency
  double eps_bg = 1.0;        ///< background relative dielectric constant (>= 1)
  double n_alpha_s = 1e-3;    ///< disorder strength n*alpha_s (dimensionless)
  double n_lambda3 = 1.0;     ///< scatterers per cubic resonance wavelength, n*lambda_A^3
  double z_over_lambda = 1.0; ///< atom-surface distance z_A / lambda_A

  double lambda_a() const { return 2.0 * std::numbers::pi * InternalUnits::c / omega_a; }
  double z_a() const { return z_over_lambda * lambda_a(); }
  /// scatterer number density n
  double density() const { return n_lambda3 / std::pow(lambda_a(), 3); }
  /// scatterer polarizability alpha_s, recovered from n*alpha_s and n
  double alpha_s() const { return n_alpha_s / density(); }

  /// True when the disorder strength is outside the dilute regime the
  /// formulas assume (n*alpha_s of order na^3 must stay small).
  bool diluteness_warning() const { return n_alpha_s >= 0.1; }

  void validate() const {
    if (!(alpha0 > 0.0) || !std::isfinite(alpha0))
      throw std::invalid_argument("ModelParams: alpha0 must be positive");
    if (!(omega_a > 0.0) || !std::isfinite(omega_a))
      throw std::invalid_argument("ModelParams: omega_a must be positive");
    if (!(eps_bg >= 1.0) || !std::isfinite(eps_bg))
      throw std::invalid_argument("ModelParams: eps_bg must be >= 1");
    if (!(n_alpha_s >= 0.0) || !std::isfinite(n_alpha_s))
      throw std::invalid_argument("ModelParams: n_alpha_s must be >= 0");
    if (!(n_lambda3 > 0.0) || !std::isfinite(n_lambda3))
      throw std::invalid_argument("ModelParams: n_lambda3 must be positive");
    if (!(z_over_lambda > 0.0) || !std::isfinite(z_over_lambda))
      throw std::invalid_argument("ModelParams: z_over_lambda must be positive");
  }
};

/// Atomic polarizability on the imaginary frequency axis,
/// alpha(i*xi) = alpha(0) / (1 + xi^2/omega_A^2). Monotone decreasing,
/// bounded by alpha(0).
inline double wick_polarizability(double xi, const ModelParams& p) {
  if (xi < 0.0 || !std::isfinite(xi))
    throw std::domain_error("wick_polarizability: negative imaginary frequency");
  const double w2 = p.omega_a * p.omega_a;
  return p.alpha0 * w2 / (w2 + xi * xi);
}

/// Effective medium dielectric constant eps_tilde = eps * (1 + n*alpha_s).
inline double effective_epsilon(const ModelParams& p) {
  return p.eps_bg * (1.0 + p.n_alpha_s);
}

}  // namespace casimir
