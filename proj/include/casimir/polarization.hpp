#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace casimir {

enum class Pol { TE, TM };

/// One term of the sixteen-fold polarization sum.
struct PolarizationAssignment {
  Pol pa, pb, pc, pd;
};

inline constexpr std::array<Pol, 2> kPols = {Pol::TE, Pol::TM};

inline std::array<PolarizationAssignment, 16> all_polarization_assignments() {
  std::array<PolarizationAssignment, 16> out{};
  int i = 0;
  for (Pol pa : kPols)
    for (Pol pb : kPols)
      for (Pol pc : kPols)
        for (Pol pd : kPols) out[i++] = {pa, pb, pc, pd};
  return out;
}

/// Kinematic state of the four modes entering the variance integrands.
///
/// Frame convention: q_d lies along +x; phi is the angle of q_b and
/// phi_prime the angle of q_a, both measured from q_d. The fourth
/// transverse momentum is fixed by the memory-effect constraint
/// q_c = q_a - q_b + q_d. Modes a, b carry xi1; modes c, d carry xi2.
/// All lengths are in internal units (c = 1).
struct ModeQuad {
  double xi1 = 0.0, xi2 = 0.0;
  double qa = 0.0, qb = 0.0, qd = 0.0;
  double phi = 0.0, phi_prime = 0.0;

  // derived
  double qc = 0.0;
  double kappa_a = 0.0, kappa_b = 0.0, kappa_c = 0.0, kappa_d = 0.0;
  double qc_dir_cos = 1.0, qc_dir_sin = 0.0;  // direction cosines of q_c
  double cos_phi = 1.0, sin_phi = 0.0;
  double cos_phip = 1.0, sin_phip = 0.0;
};

/// Builds a ModeQuad and its derived quantities.
///
/// q_c is taken from the closed-form magnitude
///   qc^2 = qa^2 + qb^2 + qd^2 - 2 qa qb cos(phi'-phi)
///          + 2 qa qd cos(phi') - 2 qb qd cos(phi)
/// with tiny negative round-off clamped to zero. Its direction cosines come
/// from the explicit 2-vector q_a - q_b + q_d; when that vector degenerates
/// to zero (a measure-zero configuration) the kinematics are nudged by a
/// 1e-9 relative perturbation and the limiting direction is used instead.
inline ModeQuad make_mode_quad(double xi1, double xi2, double qa, double qb,
                               double qd, double phi, double phi_prime) {
  if (xi1 < 0.0 || xi2 < 0.0 || qa < 0.0 || qb < 0.0 || qd < 0.0)
    throw std::domain_error("make_mode_quad: negative magnitude");
  ModeQuad m;
  m.xi1 = xi1;
  m.xi2 = xi2;
  m.qa = qa;
  m.qb = qb;
  m.qd = qd;
  m.phi = phi;
  m.phi_prime = phi_prime;
  m.cos_phi = std::cos(phi);
  m.sin_phi = std::sin(phi);
  m.cos_phip = std::cos(phi_prime);
  m.sin_phip = std::sin(phi_prime);
  const double cos_d = m.cos_phip * m.cos_phi + m.sin_phip * m.sin_phi;

  const double qc2 = qa * qa + qb * qb + qd * qd - 2.0 * qa * qb * cos_d +
                     2.0 * qa * qd * m.cos_phip - 2.0 * qb * qd * m.cos_phi;
  m.qc = std::sqrt(std::max(qc2, 0.0));

  double cx = qa * m.cos_phip - qb * m.cos_phi + qd;
  double cy = qa * m.sin_phip - qb * m.sin_phi;
  double qc_vec = std::hypot(cx, cy);
  const double qmax = std::max({qa, qb, qd});
  if (qc_vec < 1e-12 * qmax || (qc_vec == 0.0 && qmax > 0.0)) {
    const double eps = 1e-9;
    const double qa_p = qa * (1.0 + eps);
    const double phi_p = phi + eps;
    cx = qa_p * m.cos_phip - qb * std::cos(phi_p) + qd;
    cy = qa_p * m.sin_phip - qb * std::sin(phi_p);
    qc_vec = std::hypot(cx, cy);
  }
  if (qc_vec > 0.0) {
    m.qc_dir_cos = cx / qc_vec;
    m.qc_dir_sin = cy / qc_vec;
  }  // else all momenta vanish; keep the +x reference direction

  m.kappa_a = std::hypot(xi1, qa);
  m.kappa_b = std::hypot(xi1, qb);
  m.kappa_c = std::hypot(xi2, m.qc);
  m.kappa_d = std::hypot(xi2, qd);
  return m;
}

inline double kappa_sum(const ModeQuad& m) {
  return m.kappa_a + m.kappa_b + m.kappa_c + m.kappa_d;
}

/// Scalar product eps_{pa}(q_a) . eps_{pb}(q_b) in closed form (modes at
/// xi1; incoming a, outgoing b):
///   TE.TE = cos(phi'-phi)
///   TE.TM = kappa_b sin(phi'-phi)/xi1      TM.TE = kappa_a sin(phi'-phi)/xi1
///   TM.TM = -(qa qb + kappa_a kappa_b cos(phi'-phi))/xi1^2
inline double eps_dot_ab(const ModeQuad& m, Pol pa, Pol pb) {
  const double cos_d = m.cos_phip * m.cos_phi + m.sin_phip * m.sin_phi;
  const double sin_d = m.sin_phip * m.cos_phi - m.cos_phip * m.sin_phi;
  if ((pa == Pol::TM || pb == Pol::TM) && m.xi1 == 0.0)
    throw std::domain_error("eps_dot_ab: TM polarization at xi1 = 0");
  if (pa == Pol::TE && pb == Pol::TE) return cos_d;
  if (pa == Pol::TE && pb == Pol::TM) return m.kappa_b * sin_d / m.xi1;
  if (pa == Pol::TM && pb == Pol::TE) return m.kappa_a * sin_d / m.xi1;
  return -(m.qa * m.qb + m.kappa_a * m.kappa_b * cos_d) / (m.xi1 * m.xi1);
}

/// Scalar product eps_{pc}(q_c) . eps_{pd}(q_d) in closed form (modes at
/// xi2; incoming c, outgoing d). With the direction cosines
/// A = (qd - qb cos(phi) + qa cos(phi'))/qc, B = (qa sin(phi') - qb sin(phi))/qc:
///   TE.TE = A
///   TE.TM = kappa_d B/xi2                  TM.TE = kappa_c B/xi2
///   TM.TM = -(A kappa_c kappa_d + qc qd)/xi2^2
inline double eps_dot_cd(const ModeQuad& m, Pol pc, Pol pd) {
  if ((pc == Pol::TM || pd == Pol::TM) && m.xi2 == 0.0)
    throw std::domain_error("eps_dot_cd: TM polarization at xi2 = 0");
  const double a = m.qc_dir_cos;
  const double b = m.qc_dir_sin;
  if (pc == Pol::TE && pd == Pol::TE) return a;
  if (pc == Pol::TE && pd == Pol::TM) return m.kappa_d * b / m.xi2;
  if (pc == Pol::TM && pd == Pol::TE) return m.kappa_c * b / m.xi2;
  return -(a * m.kappa_c * m.kappa_d + m.qc * m.qd) / (m.xi2 * m.xi2);
}

using CVec3 = std::array<std::complex<double>, 3>;

/// Bilinear (unconjugated) dot product; the Wick-rotated mode vectors are
/// "unit" in this sense, eps.eps = 1.
inline std::complex<double> dot(const CVec3& u, const CVec3& v) {
  return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
}

inline std::complex<double> dot_real(const CVec3& u,
                                     const std::array<double, 3>& v) {
  return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
}

enum class ModeDirection { Incoming, Outgoing };

struct PolarizationVectors {
  CVec3 te;
  CVec3 tm;
};

/// Explicit polarization 3-vectors of a mode with in-plane wave vector
/// (qx, qy) at imaginary frequency xi:
///   eps_TE = zhat x qhat,
///   eps_TM = eps_TE x khat,  k = q +/- i kappa zhat, |k| = i xi/c,
/// which gives eps_TM = (s kappa qhat + i q zhat)/xi with s = +1 for
/// incoming and -1 for outgoing modes. Pairwise bilinear dot products of
/// these vectors reproduce the closed forms above exactly.
inline PolarizationVectors build_polarization_vectors(
    double qx, double qy, double xi, double kappa, ModeDirection dir,
    double ref_azimuth = 0.0) {
  if (xi == 0.0)
    throw std::domain_error("build_polarization_vectors: xi = 0 (TM diverges)");
  const double q = std::hypot(qx, qy);
  double hx, hy;
  if (q > 0.0) {
    hx = qx / q;
    hy = qy / q;
  } else {
    hx = std::cos(ref_azimuth);
    hy = std::sin(ref_azimuth);
  }
  const double s = (dir == ModeDirection::Incoming) ? 1.0 : -1.0;
  PolarizationVectors v;
  v.te = {std::complex<double>(-hy), std::complex<double>(hx),
          std::complex<double>(0.0)};
  v.tm = {std::complex<double>(s * kappa * hx / xi),
          std::complex<double>(s * kappa * hy / xi),
          std::complex<double>(0.0, q / xi)};
  return v;
}

namespace detail {

/// xi-scaled mode vectors: TE as-is, TM multiplied by xi so that every
/// component is polynomial in the kinematics. Used by the variance
/// integrands, which re-apply the xi powers analytically.
struct ScaledModeVectors {
  CVec3 te;
  CVec3 tm_scaled;  // xi * eps_TM = s kappa qhat + i q zhat
};

inline ScaledModeVectors scaled_mode_vectors(double hx, double hy, double q,
                                             double kappa, double sign) {
  ScaledModeVectors v;
  v.te = {std::complex<double>(-hy), std::complex<double>(hx),
          std::complex<double>(0.0)};
  v.tm_scaled = {std::complex<double>(sign * kappa * hx),
                 std::complex<double>(sign * kappa * hy),
                 std::complex<double>(0.0, q)};
  return v;
}

}  // namespace detail

/// Polarization sum over (pa, pb) folded with the xi1^4 prefactor of the
/// single-scattering integrand:
///   xi1^4 * sum_{pa,pb} (eps_a . eps_b)^2
///     = xi1^4 cos^2 D + xi1^2 (kappa_a^2 + kappa_b^2) sin^2 D
///       + (qa qb + kappa_a kappa_b cos D)^2,  D = phi' - phi.
/// Polynomial in the kinematics, finite down to xi1 = 0.
inline double pol_sum_ab_xi4(const ModeQuad& m) {
  const double cos_d = m.cos_phip * m.cos_phi + m.sin_phip * m.sin_phi;
  const double sin_d = m.sin_phip * m.cos_phi - m.cos_phip * m.sin_phi;
  const double xi2 = m.xi1 * m.xi1;
  const double tm_tm = m.qa * m.qb + m.kappa_a * m.kappa_b * cos_d;
  return xi2 * xi2 * cos_d * cos_d +
         xi2 * (m.kappa_a * m.kappa_a + m.kappa_b * m.kappa_b) * sin_d * sin_d +
         tm_tm * tm_tm;
}

/// Same fold for the (pc, pd) pair with xi2^4.
inline double pol_sum_cd_xi4(const ModeQuad& m) {
  const double a = m.qc_dir_cos;
  const double b = m.qc_dir_sin;
  const double x2 = m.xi2 * m.xi2;
  const double tm_tm = a * m.kappa_c * m.kappa_d + m.qc * m.qd;
  return x2 * x2 * a * a +
         x2 * (m.kappa_c * m.kappa_c + m.kappa_d * m.kappa_d) * b * b +
         tm_tm * tm_tm;
}

}  // namespace casimir
