#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "casimir/average_potential.hpp"
#include "casimir/model.hpp"
#include "casimir/polarization.hpp"
#include "casimir/quad/qmc.hpp"

namespace casimir {

/// One point of the scaled single-scattering fluctuation curve.
struct GammaPoint {
  double z_over_lambda = 0.0;
  double gamma_scaled = 0.0;  // gamma * sqrt(n z_A^3): n-independent
  double stat_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  bool converged = false;
};

/// Variable part of the single-scattering variance integrand at one
/// kinematic point:
///
///   xi1^4 xi2^4 alpha(i xi1) alpha(i xi2)
///     * e^{-(sum kappa) z_A} / (kappa_a kappa_b kappa_c kappa_d)
///     * 1/(sum kappa) * sum_pol (eps_a.eps_b)^2 (eps_c.eps_d)^2
///
/// (the xi^4 factors are folded into the polarization sums). Constant
/// prefactors and measure factors are applied once in variance_single,
/// never here, so independent reimplementations can be compared pointwise.
/// Non-negative by construction.
inline double integrand_single(const ModeQuad& m, const ModelParams& p) {
  if (!(m.xi1 > 0.0) || !(m.xi2 > 0.0))
    throw std::domain_error("integrand_single: xi1, xi2 must be positive");
  const double ks = kappa_sum(m);
  const double val = wick_polarizability(m.xi1, p) *
                     wick_polarizability(m.xi2, p) * pol_sum_ab_xi4(m) *
                     pol_sum_cd_xi4(m) *
                     std::exp(-ks * p.z_a()) /
                     (m.kappa_a * m.kappa_b * m.kappa_c * m.kappa_d * ks);
  if (!std::isfinite(val)) {
    std::ostringstream os;
    os << "integrand_single: non-finite value at xi1=" << m.xi1
       << " xi2=" << m.xi2 << " qa=" << m.qa << " qb=" << m.qb
       << " qd=" << m.qd << " phi=" << m.phi << " phi'=" << m.phi_prime;
    throw std::runtime_error(os.str());
  }
  return val;
}

namespace detail {

/// The fluctuation observables are leading order in n*alpha_s, so their
/// denominator uses the first-order reduction factor: eta/(n alpha_s)
/// evaluated in the n alpha_s -> 0 limit (a tiny reference value keeps the
/// quadrature path unchanged). This also makes the scaled outputs exactly
/// independent of n and alpha_s.
inline EtaPoint eta_first_order(ModelParams p) {
  p.n_alpha_s = 1e-6;
  return eta(p);
}

inline quad::QuadSpec variance_single_spec(const ModelParams& p,
                                           quad::QuadSpec spec) {
  const double z = p.z_a();
  const double mu_q = 1.0 / z;
  const double mu_xi = std::min(p.omega_a, 1.0 / z);
  spec.dim = 7;
  spec.transforms = {quad::Transform::semi_infinite(mu_xi),
                     quad::Transform::semi_infinite(mu_xi),
                     quad::Transform::semi_infinite(mu_q),
                     quad::Transform::semi_infinite(mu_q),
                     quad::Transform::semi_infinite(mu_q),
                     quad::Transform::angle(),
                     quad::Transform::angle()};
  return spec;
}

}  // namespace detail

/// 7-D randomized-QMC estimate of the single-scattering variance
/// <dU^2>(z_A) in internal units. Estimates whose replication error
/// exceeds spec.target_rel_error come back with converged = false.
inline quad::IntegralEstimate variance_single(const ModelParams& p,
                                              const quad::QuadSpec& spec_in) {
  p.validate();
  const quad::QuadSpec spec = detail::variance_single_spec(p, spec_in);

  auto f = [&p, &spec](std::span<const double> u) {
    double jac = 1.0;
    double v[7];
    for (int j = 0; j < 7; ++j) {
      const auto [x, jx] = spec.transforms[j](u[j]);
      v[j] = x;
      jac *= jx;
    }
    const ModeQuad m = make_mode_quad(v[0], v[1], v[2], v[3], v[4], v[5], v[6]);
    const double fx = jac * m.qa * m.qb * m.qd * integrand_single(m, p);
    if (fx < 0.0)
      throw std::runtime_error("variance_single: negative integrand sample");
    return fx;
  };

  quad::IntegralEstimate est = quad::integrate_qmc(f, spec);
  const double two_pi_7 = std::pow(2.0 * std::numbers::pi, 7);
  const double prefactor = p.n_alpha_s * p.alpha_s() / (16.0 * two_pi_7);
  est.value *= prefactor;
  est.std_error *= prefactor;
  return est;
}

/// Relative single-scattering fluctuation, returned pre-scaled by
/// sqrt(n z_A^3):  gamma = sqrt(<dU^2>) / (eta |U_*|) with the first-order
/// eta normalization, so the output is independent of both n and alpha_s.
/// Valid for the no-interface-contrast theory only (eps_bg = 1).
inline GammaPoint gamma_single(const ModelParams& p,
                               const quad::QuadSpec& spec) {
  p.validate();
  if (p.eps_bg != 1.0)
    throw std::invalid_argument(
        "gamma_single: fluctuation theory assumes eps_bg = 1");
  const quad::IntegralEstimate var = variance_single(p, spec);
  const EtaPoint et = detail::eta_first_order(p);
  const double denom = et.eta_over_nalphas * p.n_alpha_s * std::abs(ustar(p));
  const double gamma = std::sqrt(var.value) / denom;
  const double z = p.z_a();
  const double scale = std::sqrt(p.density() * z * z * z);

  GammaPoint g;
  g.z_over_lambda = p.z_over_lambda;
  g.gamma_scaled = gamma * scale;
  const double rel_var = var.value > 0.0 ? 0.5 * var.std_error / var.value : 0.0;
  const double rel_eta = et.abs_error / et.eta_over_nalphas;
  g.stat_error = g.gamma_scaled * std::sqrt(rel_var * rel_var + rel_eta * rel_eta);
  g.n_samples = var.n_total;
  g.seed = var.seed;
  g.converged = var.converged && et.converged;
  return g;
}

}  // namespace casimir
