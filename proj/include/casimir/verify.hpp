#pragma once

// Self-check suite behind the `verify` CLI subcommand: closed forms against
// geometric constructions, quadrature machinery against known integrals,
// and (at the full level) the 7-D variance pipeline against the brute-force
// grid oracle.

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "casimir/average_potential.hpp"
#include "casimir/model.hpp"
#include "casimir/oracle/bruteforce.hpp"
#include "casimir/oracle/dual_integrands.hpp"
#include "casimir/oracle/powerlaw.hpp"
#include "casimir/polarization.hpp"
#include "casimir/quad/qmc.hpp"
#include "casimir/variance_double.hpp"
#include "casimir/variance_single.hpp"

namespace casimir {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace verify_detail {

inline CheckResult make(const std::string& name, bool pass,
                        const std::string& detail) {
  return CheckResult{name, pass, detail};
}

inline std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

inline CheckResult sobol_known_points() {
  quad::SobolSequence seq(2);
  const std::uint32_t zero_shift[2] = {0, 0};
  const double expect[5][2] = {{0.5, 0.5},
                               {0.75, 0.25},
                               {0.25, 0.75},
                               {0.375, 0.375},
                               {0.875, 0.875}};
  double worst = 0.0;
  for (std::uint64_t k = 1; k <= 5; ++k) {
    double u[2];
    seq.point(k, std::span<const std::uint32_t>(zero_shift, 2),
              std::span<double>(u, 2));
    for (int j = 0; j < 2; ++j)
      worst = std::max(worst, std::abs(u[j] - expect[k - 1][j]));
  }
  // centering shifts each coordinate by 2^-33
  return make("sobol-known-points", worst < 1e-9,
              "max deviation " + num(worst));
}

inline CheckResult map_roundtrip() {
  double worst = 0.0;
  for (int i = 1; i < 64; ++i) {
    const double t = i / 64.0;
    for (double mu : {0.1, 1.0, 47.0}) {
      const auto [v, jac] = quad::map_semiinfinite(t, mu);
      (void)jac;
      worst = std::max(worst, std::abs(quad::map_semiinfinite_inverse(v, mu) - t));
    }
  }
  return make("semiinfinite-map-roundtrip", worst < 1e-14,
              "max |t - inv(map(t))| = " + num(worst));
}

inline CheckResult known_integrals_1d() {
  // exp(-v) over the half line through the map
  auto f = [](double t) {
    const auto [v, jac] = quad::map_semiinfinite(t, 1.0);
    return std::exp(-v) * jac;
  };
  const auto r = quad::integrate_adaptive(f, 0.0, 1.0, 1e-12, 1e-12);
  const double e1 = std::abs(r.value - 1.0);
  // integrable endpoint singularity x^{-1/2}
  const auto s = quad::integrate_adaptive(
      [](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-8, 1e-10);
  const double e2 = std::abs(s.value - 2.0);
  return make("deterministic-quadrature-known-integrals",
              e1 < 1e-8 && e2 < 1e-6,
              "exp err " + num(e1) + ", sqrt err " + num(e2));
}

inline CheckResult qmc_known_integrals() {
  quad::QuadSpec spec;
  spec.dim = 7;
  spec.budget = 1u << 14;
  spec.replications = 8;
  spec.seed = 20240901;
  auto prod = [](std::span<const double> u) {
    double p = 1.0;
    for (double x : u) p *= x;
    return p;
  };
  const auto r1 = quad::integrate_qmc(prod, spec);
  const double truth1 = std::pow(0.5, 7);
  const bool ok1 = std::abs(r1.value - truth1) <= 3.0 * r1.std_error + 1e-12;

  auto bump = [](std::span<const double> u) {
    double p = 1.0;
    for (double x : u) p *= std::exp(-8.0 * (x - 0.5) * (x - 0.5));
    return p;
  };
  // per-dimension closed form: sqrt(pi/8) * erf(sqrt(2))
  const double per_dim = std::sqrt(std::numbers::pi / 8.0) *
                         std::erf(std::sqrt(2.0));
  const double truth2 = std::pow(per_dim, 7);
  const auto r2 = quad::integrate_qmc(bump, spec);
  const bool ok2 = std::abs(r2.value - truth2) <= 3.0 * r2.std_error + 1e-12;
  return make("qmc-known-integrals", ok1 && ok2,
              "moment err " + num(std::abs(r1.value - truth1)) + ", bump err " +
                  num(std::abs(r2.value - truth2)));
}

inline CheckResult qmc_worker_determinism() {
  auto f = [](std::span<const double> u) {
    double s = 0.0;
    for (double x : u) s += std::cos(3.0 * x) * x;
    return s;
  };
  quad::QuadSpec spec;
  spec.dim = 5;
  spec.budget = 1u << 14;
  spec.replications = 4;
  spec.seed = 7;
  double vals[3];
  int i = 0;
  for (int threads : {1, 2, 5}) {
    spec.threads = threads;
    vals[i++] = quad::integrate_qmc(f, spec).value;
  }
  const bool ok = vals[0] == vals[1] && vals[1] == vals[2];
  return make("qmc-worker-determinism", ok,
              ok ? "bitwise identical for 1/2/5 workers" : "mismatch");
}

inline CheckResult polarization_tables(int draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.05, 3.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  double worst = 0.0;
  for (int it = 0; it < draws; ++it) {
    const double xi1 = mag(rng), xi2 = mag(rng);
    const double qa = mag(rng), qb = mag(rng), qd = mag(rng);
    const double phi = ang(rng), phip = ang(rng);
    const ModeQuad m = make_mode_quad(xi1, xi2, qa, qb, qd, phi, phip);

    const auto va = build_polarization_vectors(qa * m.cos_phip, qa * m.sin_phip,
                                               xi1, m.kappa_a,
                                               ModeDirection::Incoming);
    const auto vb = build_polarization_vectors(qb * m.cos_phi, qb * m.sin_phi,
                                               xi1, m.kappa_b,
                                               ModeDirection::Outgoing);
    const double cx = qa * m.cos_phip - qb * m.cos_phi + qd;
    const double cy = qa * m.sin_phip - qb * m.sin_phi;
    const auto vc = build_polarization_vectors(cx, cy, xi2, m.kappa_c,
                                               ModeDirection::Incoming);
    const auto vd = build_polarization_vectors(qd, 0.0, xi2, m.kappa_d,
                                               ModeDirection::Outgoing);

    for (Pol pa : kPols)
      for (Pol pb : kPols) {
        const double table = eps_dot_ab(m, pa, pb);
        const double geom = dot(pa == Pol::TE ? va.te : va.tm,
                                pb == Pol::TE ? vb.te : vb.tm)
                                .real();
        worst = std::max(worst, std::abs(table - geom) /
                                    std::max(1.0, std::abs(table)));
      }
    for (Pol pc : kPols)
      for (Pol pd : kPols) {
        const double table = eps_dot_cd(m, pc, pd);
        const double geom = dot(pc == Pol::TE ? vc.te : vc.tm,
                                pd == Pol::TE ? vd.te : vd.tm)
                                .real();
        worst = std::max(worst, std::abs(table - geom) /
                                    std::max(1.0, std::abs(table)));
      }
  }
  return make("polarization-tables-vs-geometric", worst < 1e-12,
              "worst relative deviation " + num(worst));
}

inline CheckResult qc_consistency(int draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.0, 5.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  double worst = 0.0;
  for (int it = 0; it < draws; ++it) {
    const double qa = mag(rng), qb = mag(rng), qd = mag(rng);
    const double phi = ang(rng), phip = ang(rng);
    const ModeQuad m = make_mode_quad(0.3, 0.7, qa, qb, qd, phi, phip);
    const double cx = qa * std::cos(phip) - qb * std::cos(phi) + qd;
    const double cy = qa * std::sin(phip) - qb * std::sin(phi);
    const double qc_vec = std::hypot(cx, cy);
    const double scale = std::max({qa, qb, qd, 1e-300});
    worst = std::max(worst, std::abs(m.qc - qc_vec) / scale);
  }
  return make("qc-closed-form-vs-vector", worst < 1e-13,
              "worst scaled deviation " + num(worst));
}

inline CheckResult eta_asymptotics() {
  ModelParams p;
  p.n_alpha_s = 1e-3;
  p.z_over_lambda = 100.0;
  const EtaPoint far = eta(p);
  const double err_far = std::abs(far.eta_over_nalphas - 23.0 / 60.0) /
                         (23.0 / 60.0);
  p.z_over_lambda = 1e-3;
  const EtaPoint near = eta(p);
  const double target = eta_asymptote(1e-3, Regime::Short);
  const double err_near = std::abs(near.eta_over_nalphas - target) / target;
  return make("eta-asymptotes", err_far < 0.01 && err_near < 0.02,
              "long err " + num(err_far) + ", short err " + num(err_near));
}

inline CheckResult perfect_mirror() {
  ModelParams p;
  p.eps_bg = 1e6;
  p.n_alpha_s = 0.0;
  p.z_over_lambda = 100.0;
  const PotentialResult eta_raw = reduction_factor(p);
  const double err = std::abs(eta_raw.value - 1.0);
  return make("perfect-mirror-recovery", err < 0.01,
              "|eta - 1| = " + num(err));
}

inline CheckResult eta_grid_oracle() {
  ModelParams p;
  p.n_alpha_s = 1e-3;
  p.z_over_lambda = 1.0;
  const EtaPoint main_path = eta(p);
  const double grid = oracle::eta_bruteforce(p, 512);
  const double rel = std::abs(main_path.eta_over_nalphas - grid) /
                     main_path.eta_over_nalphas;
  return make("eta-adaptive-vs-grid", rel < 0.02,
              "relative difference " + num(rel));
}

inline CheckResult dual_integrand_single(int draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.05, 2.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  ModelParams p;
  p.z_over_lambda = 0.3;
  double worst = 0.0;
  for (int it = 0; it < draws; ++it) {
    const double xi1 = mag(rng), xi2 = mag(rng);
    const double qa = mag(rng), qb = mag(rng), qd = mag(rng);
    const double phi = ang(rng), phip = ang(rng);
    const ModeQuad m = make_mode_quad(xi1, xi2, qa, qb, qd, phi, phip);
    const double main_val = integrand_single(m, p);
    const oracle::Vec2 va{qa * std::cos(phip), qa * std::sin(phip)};
    const oracle::Vec2 vb{qb * std::cos(phi), qb * std::sin(phi)};
    const oracle::Vec2 vd{qd, 0.0};
    const double o = oracle::integrand_single_vec(xi1, xi2, va, vb, vd, p);
    worst = std::max(worst, std::abs(main_val - o) / std::abs(o));
  }
  return make("variance-single-dual-implementation", worst < 1e-12,
              "worst relative deviation " + num(worst));
}

inline CheckResult dual_integrand_double(int draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.05, 2.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> ct(-1.0, 1.0);
  ModelParams p;
  p.z_over_lambda = 0.3;
  double worst = 0.0;
  for (int it = 0; it < draws; ++it) {
    const double xi1 = mag(rng), xi2 = mag(rng);
    const double qa = mag(rng), qb = mag(rng), qd = mag(rng);
    const double phi = ang(rng), phip = ang(rng);
    const ModeQuad m = make_mode_quad(xi1, xi2, qa, qb, qd, phi, phip);
    const RHat r{ct(rng), ang(rng)};
    const double main_val = integrand_double(m, r, p);
    const oracle::Vec2 va{qa * std::cos(phip), qa * std::sin(phip)};
    const oracle::Vec2 vb{qb * std::cos(phi), qb * std::sin(phi)};
    const oracle::Vec2 vd{qd, 0.0};
    const double o = oracle::integrand_double_vec(xi1, xi2, va, vb, vd,
                                                  r.unit_vector(), p);
    const double scale = std::max(std::abs(o), 1e-30);
    worst = std::max(worst, std::abs(main_val - o) / scale);
  }
  return make("variance-double-dual-implementation", worst < 1e-12,
              "worst relative deviation " + num(worst));
}

inline CheckResult qmc_vs_bruteforce(double z_over_lambda, int threads) {
  ModelParams p;
  p.z_over_lambda = z_over_lambda;
  quad::QuadSpec spec;
  spec.budget = 1u << 17;
  spec.replications = 16;
  spec.seed = 424242;
  spec.threads = threads;
  const auto qmc = variance_single(p, spec);
  const auto grid = oracle::variance_single_bruteforce(p, 12, threads);
  const double diff = std::abs(qmc.value - grid.value);
  const double band = 3.0 * (qmc.std_error + grid.error);
  std::ostringstream os;
  os << "z/lambda=" << z_over_lambda << ": |qmc-grid| = " << diff
     << ", 3x combined = " << band;
  return make("variance-qmc-vs-grid-z" + num(z_over_lambda), diff <= band,
              os.str());
}

inline CheckResult qmc_calibration(int n_seeds) {
  int pass = 0, total = 0;
  for (int s = 0; s < n_seeds; ++s) {
    quad::QuadSpec spec;
    spec.dim = 7;
    spec.budget = 1u << 13;
    spec.replications = 8;
    spec.seed = 1000 + s;
    auto prod = [](std::span<const double> u) {
      double v = 1.0;
      for (double x : u) v *= x;
      return v;
    };
    auto bump = [](std::span<const double> u) {
      double v = 1.0;
      for (double x : u) v *= std::exp(-8.0 * (x - 0.5) * (x - 0.5));
      return v;
    };
    const double per_dim = std::sqrt(std::numbers::pi / 8.0) *
                           std::erf(std::sqrt(2.0));
    const double truths[2] = {std::pow(0.5, 7), std::pow(per_dim, 7)};
    const auto r1 = quad::integrate_qmc(prod, spec);
    const auto r2 = quad::integrate_qmc(bump, spec);
    const quad::IntegralEstimate rs[2] = {r1, r2};
    for (int i = 0; i < 2; ++i) {
      ++total;
      if (std::abs(rs[i].value - truths[i]) <= 3.0 * rs[i].std_error) ++pass;
    }
  }
  const double frac = static_cast<double>(pass) / total;
  return make("qmc-error-calibration", frac >= 0.95,
              num(100.0 * frac) + "% within 3 sigma");
}

}  // namespace verify_detail

/// Runs the verification suite. level: "fast" or "full".
inline std::vector<CheckResult> run_verification(const std::string& level,
                                                 int threads = 0) {
  namespace vd = verify_detail;
  std::vector<CheckResult> out;
  out.push_back(vd::sobol_known_points());
  out.push_back(vd::map_roundtrip());
  out.push_back(vd::known_integrals_1d());
  out.push_back(vd::qmc_known_integrals());
  out.push_back(vd::qmc_worker_determinism());
  out.push_back(vd::polarization_tables(1000, 99));
  out.push_back(vd::qc_consistency(1000, 17));
  out.push_back(vd::eta_asymptotics());
  out.push_back(vd::perfect_mirror());
  out.push_back(vd::eta_grid_oracle());
  out.push_back(vd::dual_integrand_single(200, 5));
  out.push_back(vd::dual_integrand_double(200, 6));
  if (level == "full") {
    out.push_back(vd::qmc_calibration(100));
    for (double z : {0.1, 1.0, 10.0})
      out.push_back(vd::qmc_vs_bruteforce(z, threads));
  }
  return out;
}

}  // namespace casimir
