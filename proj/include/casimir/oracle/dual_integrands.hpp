#pragma once

// Independent re-derivations of the variance integrands, used only to
// cross-check the main implementations. Everything here is rebuilt from
// Cartesian 2-vectors and explicit polarization 3-vectors (the opposite
// representation of the closed-form tables used by the main path), with
// its own bracket transcription. Keep this file free of any imports from
// the variance modules.

#include <array>
#include <cmath>
#include <complex>

#include "casimir/model.hpp"
#include "casimir/polarization.hpp"

namespace casimir::oracle {

using Vec2 = std::array<double, 2>;

namespace detail {

inline PolarizationVectors mode_vectors(const Vec2& q, double xi, double kappa,
                                        ModeDirection dir) {
  return build_polarization_vectors(q[0], q[1], xi, kappa, dir);
}

}  // namespace detail

/// Single-scattering variance integrand rebuilt from scratch: explicit
/// polarization vectors, sixteen-term loop, momenta as 2-vectors.
/// Pointwise comparable with integrand_single (same variable part, no
/// constants, no measure factors).
inline double integrand_single_vec(double xi1, double xi2, const Vec2& qa,
                                   const Vec2& qb, const Vec2& qd,
                                   const ModelParams& p) {
  const Vec2 qc = {qa[0] - qb[0] + qd[0], qa[1] - qb[1] + qd[1]};
  const double ka = std::hypot(xi1, std::hypot(qa[0], qa[1]));
  const double kb = std::hypot(xi1, std::hypot(qb[0], qb[1]));
  const double kc = std::hypot(xi2, std::hypot(qc[0], qc[1]));
  const double kd = std::hypot(xi2, std::hypot(qd[0], qd[1]));
  const double ks = ka + kb + kc + kd;

  const PolarizationVectors va =
      detail::mode_vectors(qa, xi1, ka, ModeDirection::Incoming);
  const PolarizationVectors vb =
      detail::mode_vectors(qb, xi1, kb, ModeDirection::Outgoing);
  const PolarizationVectors vc =
      detail::mode_vectors(qc, xi2, kc, ModeDirection::Incoming);
  const PolarizationVectors vd =
      detail::mode_vectors(qd, xi2, kd, ModeDirection::Outgoing);

  double sum = 0.0;
  for (int ia = 0; ia < 2; ++ia)
    for (int ib = 0; ib < 2; ++ib)
      for (int ic = 0; ic < 2; ++ic)
        for (int id = 0; id < 2; ++id) {
          const double eab =
              dot(ia ? va.tm : va.te, ib ? vb.tm : vb.te).real();
          const double ecd =
              dot(ic ? vc.tm : vc.te, id ? vd.tm : vd.te).real();
          sum += eab * eab * ecd * ecd;
        }

  const double x14 = xi1 * xi1 * xi1 * xi1;
  const double x24 = xi2 * xi2 * xi2 * xi2;
  return x14 * x24 * wick_polarizability(xi1, p) *
         wick_polarizability(xi2, p) * std::exp(-ks * p.z_a()) /
         (ka * kb * kc * kd * ks) * sum;
}

/// Double-scattering variance integrand rebuilt from scratch, including an
/// independent transcription of the propagator bracket. extra_sin_theta
/// mirrors the alternative bracket reading of the main path.
inline double integrand_double_vec(double xi1, double xi2, const Vec2& qa,
                                   const Vec2& qb, const Vec2& qd,
                                   const std::array<double, 3>& rhat,
                                   const ModelParams& p,
                                   bool extra_sin_theta = false) {
  const Vec2 qc = {qa[0] - qb[0] + qd[0], qa[1] - qb[1] + qd[1]};
  const double ka = std::hypot(xi1, std::hypot(qa[0], qa[1]));
  const double kb = std::hypot(xi1, std::hypot(qb[0], qb[1]));
  const double kc = std::hypot(xi2, std::hypot(qc[0], qc[1]));
  const double kd = std::hypot(xi2, std::hypot(qd[0], qd[1]));
  const double ks = ka + kb + kc + kd;

  const PolarizationVectors va =
      detail::mode_vectors(qa, xi1, ka, ModeDirection::Incoming);
  const PolarizationVectors vb =
      detail::mode_vectors(qb, xi1, kb, ModeDirection::Outgoing);
  const PolarizationVectors vc =
      detail::mode_vectors(qc, xi2, kc, ModeDirection::Incoming);
  const PolarizationVectors vd =
      detail::mode_vectors(qd, xi2, kd, ModeDirection::Outgoing);

  double in_plane = rhat[0] * (qb[0] - qd[0]) + rhat[1] * (qb[1] - qd[1]);
  if (extra_sin_theta) in_plane *= std::hypot(rhat[0], rhat[1]);
  const std::complex<double> denom(
      std::abs(rhat[2]) * 0.5 * ks + rhat[2] * 0.5 * (ka + kc - kb - kd) +
          (xi1 + xi2),
      -in_plane);
  const std::complex<double> binv = 1.0 / denom;

  std::complex<double> total{0.0, 0.0};
  for (int ia = 0; ia < 2; ++ia)
    for (int ib = 0; ib < 2; ++ib) {
      const CVec3& ea = ia ? va.tm : va.te;
      const CVec3& eb = ib ? vb.tm : vb.te;
      const double eab = dot(ea, eb).real();
      const std::complex<double> xab =
          eab - dot_real(ea, rhat) * dot_real(eb, rhat);
      for (int ic = 0; ic < 2; ++ic)
        for (int id = 0; id < 2; ++id) {
          const CVec3& ec = ic ? vc.tm : vc.te;
          const CVec3& ed = id ? vd.tm : vd.te;
          const double ecd = dot(ec, ed).real();
          const std::complex<double> xcd =
              ecd - dot_real(ec, rhat) * dot_real(ed, rhat);
          total += eab * ecd * xab * xcd;
        }
    }

  const double x16 = std::pow(xi1, 6);
  const double x26 = std::pow(xi2, 6);
  return x16 * x26 * wick_polarizability(xi1, p) *
         wick_polarizability(xi2, p) * std::exp(-ks * p.z_a()) /
         (ka * kb * kc * kd * ks) * (total * binv).real();
}

}  // namespace casimir::oracle
