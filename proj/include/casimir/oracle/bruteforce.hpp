#pragma once

// Brute-force grid integrators used to validate the main quadrature paths.
// Integrands are transcribed independently here (no imports from the main
// integrand implementations); accuracy is secondary, independence is the
// point.

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "casimir/model.hpp"
#include "casimir/oracle/dual_integrands.hpp"
#include "casimir/quad/qmc.hpp"
#include "casimir/quad/transform.hpp"

namespace casimir::oracle {

/// Midpoint-grid estimate of eta/(n*alpha_s) on the transformed unit
/// square. Converges to the adaptive result as grid_n grows.
inline double eta_bruteforce(const ModelParams& p, int grid_n) {
  if (grid_n < 64) throw std::invalid_argument("eta_bruteforce: grid_n >= 64");
  p.validate();
  const double z = p.z_a();
  const double mu_q = 1.0 / (2.0 * z);
  const double mu_xi = std::min(p.omega_a, 1.0 / (2.0 * z));
  const double eps_t = p.eps_bg * (1.0 + p.n_alpha_s);

  double total = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    const auto [xi, jxi] =
        quad::map_semiinfinite((i + 0.5) / grid_n, mu_xi);
    const double axi = p.alpha0 / (1.0 + (xi / p.omega_a) * (xi / p.omega_a));
    for (int j = 0; j < grid_n; ++j) {
      const auto [q, jq] = quad::map_semiinfinite((j + 0.5) / grid_n, mu_q);
      const double kap = std::sqrt(xi * xi + q * q);
      const double kap_t = std::sqrt(eps_t * xi * xi + q * q);
      const double rte = (kap - kap_t) / (kap + kap_t);
      const double rtm = (eps_t * kap - kap_t) / (eps_t * kap + kap_t);
      const double w = axi * q * std::exp(-2.0 * kap * z) / (2.0 * kap) *
                       (xi * xi * rte - (xi * xi + 2.0 * q * q) * rtm);
      total += w * jxi * jq;
    }
  }
  const double pi = std::numbers::pi;
  const double ubar = total / (4.0 * pi * pi) /
                      (static_cast<double>(grid_n) * grid_n);
  const double us = -3.0 * p.alpha0 / (32.0 * pi * pi * z * z * z * z);
  return ubar / (us * p.n_alpha_s);
}

struct BruteforceEstimate {
  double value = 0.0;
  double error = 0.0;  // difference against the half-resolution grid
};

namespace detail {

inline double variance_single_grid(const ModelParams& p, int n, int threads) {
  const double z = p.z_a();
  const double mu_q = 1.0 / z;
  const double mu_xi = std::min(p.omega_a, 1.0 / z);

  // Precompute 1-D nodes.
  std::vector<double> xi_v(n), xi_j(n), q_v(n), q_j(n), cos_a(n), sin_a(n);
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) / n;
    auto [xv, xj] = quad::map_semiinfinite(t, mu_xi);
    xi_v[i] = xv;
    xi_j[i] = xj;
    auto [qv, qj] = quad::map_semiinfinite(t, mu_q);
    q_v[i] = qv;
    q_j[i] = qj;
    const double a = 2.0 * std::numbers::pi * t;
    cos_a[i] = std::cos(a);
    sin_a[i] = std::sin(a);
  }

  const long outer = static_cast<long>(n) * n;  // (xi1, xi2)
  std::vector<double> partial(outer, 0.0);
  std::atomic<long> next{0};
  auto work = [&]() {
    for (;;) {
      const long o = next.fetch_add(1);
      if (o >= outer) break;
      const int i1 = static_cast<int>(o / n);
      const int i2 = static_cast<int>(o % n);
      const double xi1 = xi_v[i1], xi2 = xi_v[i2];
      double acc = 0.0;
      for (int ia = 0; ia < n; ++ia)
        for (int ib = 0; ib < n; ++ib)
          for (int id = 0; id < n; ++id) {
            const double qa = q_v[ia], qb = q_v[ib], qd = q_v[id];
            const double meas = q_j[ia] * q_j[ib] * q_j[id] * qa * qb * qd;
            for (int kp = 0; kp < n; ++kp)    // phi'
              for (int k = 0; k < n; ++k) {   // phi
                const Vec2 va{qa * cos_a[kp], qa * sin_a[kp]};
                const Vec2 vb{qb * cos_a[k], qb * sin_a[k]};
                const Vec2 vd{qd, 0.0};
                acc += meas *
                       integrand_single_vec(xi1, xi2, va, vb, vd, p);
              }
          }
      partial[o] = acc * xi_j[i1] * xi_j[i2];
    }
  };
  std::vector<std::thread> pool;
  const int nt = std::max(1, threads);
  for (int t = 0; t < nt; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();

  double total = 0.0;
  for (double v : partial) total += v;

  // Midpoint weights: (1/n) per transformed axis, (2pi/n) per angle.
  const double pi2 = 2.0 * std::numbers::pi;
  const double cell = std::pow(1.0 / n, 5) * std::pow(pi2 / n, 2);
  const double two_pi_7 = std::pow(pi2, 7);
  return total * cell * p.n_alpha_s * p.alpha_s() / (16.0 * two_pi_7);
}

}  // namespace detail

/// Nested midpoint-grid estimate of the 7-D single-scattering variance,
/// with the error taken as the change from the half-resolution grid.
/// grid_n is the number of nodes per dimension (kept small; 12^7 points is
/// the intended ceiling).
inline BruteforceEstimate variance_single_bruteforce(const ModelParams& p,
                                                     int grid_n,
                                                     int threads = 0) {
  if (grid_n < 4 || grid_n > 16)
    throw std::invalid_argument("variance_single_bruteforce: grid_n in [4,16]");
  p.validate();
  const int nt = quad::resolve_threads(threads);
  BruteforceEstimate est;
  est.value = detail::variance_single_grid(p, grid_n, nt);
  const double coarse = detail::variance_single_grid(p, grid_n / 2, nt);
  est.error = std::abs(est.value - coarse);
  return est;
}

}  // namespace casimir::oracle
