#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "casimir/model.hpp"
#include "casimir/quad/integrate2d.hpp"
#include "casimir/quad/transform.hpp"

namespace casimir {

/// One point of the reduction-factor curve eta(z)/(n*alpha_s).
struct EtaPoint {
  double z_over_lambda = 0.0;
  double eta_over_nalphas = 0.0;
  double abs_error = 0.0;
  bool converged = false;
};

enum class Regime { Short, Long };

namespace detail {
inline void check_fresnel_args(double xi, double q, double eps_tilde) {
  if (xi < 0.0 || q < 0.0)
    throw std::domain_error("fresnel: xi and q must be non-negative");
  if (xi == 0.0 && q == 0.0)
    throw std::domain_error("fresnel: xi and q cannot both vanish (kappa = 0)");
  if (!(eps_tilde >= 1.0))
    throw std::domain_error("fresnel: eps_tilde must be >= 1");
}
}  // namespace detail

/// TE Fresnel coefficient on the imaginary frequency axis:
/// r_TE = (kappa - kappa_tilde)/(kappa + kappa_tilde) with
/// kappa = sqrt(xi^2/c^2 + q^2), kappa_tilde = sqrt(eps_tilde xi^2/c^2 + q^2).
/// Lies in (-1, 0]; zero iff eps_tilde = 1.
inline double fresnel_te(double xi, double q, double eps_tilde) {
  detail::check_fresnel_args(xi, q, eps_tilde);
  const double kappa = std::hypot(xi, q);
  const double kappa_t = std::sqrt(eps_tilde * xi * xi + q * q);
  return (kappa - kappa_t) / (kappa + kappa_t);
}

/// TM Fresnel coefficient on the imaginary frequency axis:
/// r_TM = (eps_tilde*kappa - kappa_tilde)/(eps_tilde*kappa + kappa_tilde).
/// Lies in [0, 1); zero iff eps_tilde = 1.
inline double fresnel_tm(double xi, double q, double eps_tilde) {
  detail::check_fresnel_args(xi, q, eps_tilde);
  const double kappa = std::hypot(xi, q);
  const double kappa_t = std::sqrt(eps_tilde * xi * xi + q * q);
  return (eps_tilde * kappa - kappa_t) / (eps_tilde * kappa + kappa_t);
}

/// Integrand of the average potential over the (xi, q) quarter-plane after
/// angular reduction d^2q -> 2*pi*q*dq:
///
///   alpha(i xi) * q/(2 pi) * e^{-2 kappa z_A}/(2 kappa)
///     * [xi^2 r_TE - (xi^2 + 2 q^2) r_TM]
///
/// The bracket is the grouped form of xi^2 [r_TE - (1 + 2q^2/xi^2) r_TM];
/// it is finite for xi -> 0 at fixed q (the 1/xi^2 pole of the original
/// bracket cancels against the xi^2 prefactor identically), so no floor or
/// branch is needed near the axis.
inline double avg_potential_integrand(double xi, double q,
                                      const ModelParams& p) {
  if (xi == 0.0 && q == 0.0)
    throw std::domain_error("avg_potential_integrand: xi = q = 0");
  const double eps_t = effective_epsilon(p);
  const double rte = fresnel_te(xi, q, eps_t);
  const double rtm = fresnel_tm(xi, q, eps_t);
  const double kappa = std::hypot(xi, q);
  const double bracket = xi * xi * rte - (xi * xi + 2.0 * q * q) * rtm;
  const double val = wick_polarizability(xi, p) *
                     (q / (2.0 * std::numbers::pi)) *
                     std::exp(-2.0 * kappa * p.z_a()) / (2.0 * kappa) * bracket;
  if (!std::isfinite(val)) {
    std::ostringstream os;
    os << "avg_potential_integrand: non-finite value at xi=" << xi
       << ", q=" << q;
    throw std::runtime_error(os.str());
  }
  return val;
}

/// Perfect-mirror retarded reference U_* = -3 alpha(0) hbar c / (32 pi^2 z^4).
inline double ustar(const ModelParams& p) {
  const double z = p.z_a();
  return -3.0 * p.alpha0 / (32.0 * std::numbers::pi * std::numbers::pi * z * z *
                            z * z);
}

struct PotentialResult {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = false;
};

/// Ensemble-average Casimir potential of the effective medium,
/// Ubar(z_A) = (1/2pi) int dxi int dq of avg_potential_integrand.
/// Both semi-infinite axes are mapped onto (0,1) with scales matched to the
/// e^{-2 kappa z_A} and alpha(i xi) cutoffs.
inline PotentialResult average_potential(const ModelParams& p,
                                         double rel_tol = 1e-7,
                                         double abs_tol_scale = 1e-9) {
  p.validate();
  const double z = p.z_a();
  const double mu_q = 1.0 / (2.0 * z);
  const double mu_xi = std::min(p.omega_a, 1.0 / (2.0 * z));
  const double abs_tol = abs_tol_scale * std::abs(ustar(p));

  auto f = [&](double tx, double ty) {
    const auto [q, jq] = quad::map_semiinfinite(tx, mu_q);
    const auto [xi, jxi] = quad::map_semiinfinite(ty, mu_xi);
    return avg_potential_integrand(xi, q, p) * jq * jxi;
  };
  quad::AdaptiveResult r = quad::integrate_2d_unit(f, abs_tol, rel_tol);
  PotentialResult out;
  out.value = r.value / (2.0 * std::numbers::pi);
  out.abs_error = r.error / (2.0 * std::numbers::pi);
  out.converged = r.converged;
  return out;
}

/// Reduction factor eta = Ubar / U_* (positive; tends to 1 for a perfect
/// mirror at large distance).
inline PotentialResult reduction_factor(const ModelParams& p,
                                        double rel_tol = 1e-7) {
  PotentialResult u = average_potential(p, rel_tol);
  const double us = ustar(p);
  return PotentialResult{u.value / us, u.abs_error / std::abs(us), u.converged};
}

/// Reduction factor per unit disorder strength, eta/(n*alpha_s), the
/// quantity plotted against z_A/lambda_A. Requires n_alpha_s > 0.
inline EtaPoint eta(const ModelParams& p, double abs_tol_eta = 1e-4) {
  p.validate();
  if (!(p.n_alpha_s > 0.0))
    throw std::invalid_argument("eta: n_alpha_s must be positive");
  // Map the requested tolerance on eta/(n alpha_s) onto the Ubar integral.
  const double scale = std::abs(ustar(p)) * p.n_alpha_s;
  PotentialResult u =
      average_potential(p, 1e-7, 0.5 * abs_tol_eta * p.n_alpha_s);
  EtaPoint pt;
  pt.z_over_lambda = p.z_over_lambda;
  pt.eta_over_nalphas = u.value / (ustar(p) * p.n_alpha_s);
  pt.abs_error = u.abs_error / scale;
  pt.converged = u.converged && pt.abs_error <= abs_tol_eta;
  return pt;
}

/// Asymptotic limits of eta/(n*alpha_s): 23/60 at large distance,
/// (pi^2/3) * z_A/lambda_A at short distance. The regime is always chosen
/// by the caller.
inline double eta_asymptote(double z_over_lambda, Regime regime) {
  if (regime == Regime::Long) return 23.0 / 60.0;
  return (std::numbers::pi * std::numbers::pi / 3.0) * z_over_lambda;
}

}  // namespace casimir
