// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed in code; budgets escalate automatically
// until the statistical error targets are met.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "casimir/average_potential.hpp"
#include "casimir/model.hpp"
#include "casimir/oracle/bruteforce.hpp"
#include "casimir/oracle/powerlaw.hpp"
#include "casimir/polarization.hpp"
#include "casimir/quad/qmc.hpp"
#include "casimir/variance_double.hpp"
#include "casimir/variance_single.hpp"

using namespace casimir;

namespace {

int g_threads = 0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::vector<double> log_grid(double a, double b, int n) {
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i)
    z[i] = a * std::exp(std::log(b / a) * i / (n - 1));
  return z;
}

quad::QuadSpec spec_for(std::uint64_t budget, std::uint64_t seed,
                        double target_rel) {
  quad::QuadSpec s;
  s.budget = budget;
  s.replications = 16;
  s.seed = seed;
  s.target_rel_error = target_rel;
  s.threads = g_threads;
  return s;
}

/// gamma point with budget escalation until the variance estimate meets the
/// requested relative error
GammaPoint gamma_point(ModelParams p, int order, std::uint64_t seed,
                       double gamma_rel_target,
                       std::uint64_t budget0 = std::uint64_t{1} << 16,
                       BracketReading reading = BracketReading::InPlane) {
  GammaPoint g;
  for (std::uint64_t budget = budget0; budget <= (std::uint64_t{1} << 22);
       budget *= 4) {
    const auto spec = spec_for(budget, seed, 2.0 * gamma_rel_target);
    g = order == 1 ? gamma_single(p, spec)
                   : gamma_double(p, spec, reading);
    if (g.stat_error <= gamma_rel_target * g.gamma_scaled) return g;
  }
  return g;
}

// ---------------------------------------------------------------- criteria

Outcome criterion1() {
  const double t0 = now_s();
  ModelParams p;
  p.n_alpha_s = 1e-3;
  p.z_over_lambda = 100.0;
  const EtaPoint pt = eta(p);
  const double t1 = now_s();
  const double target = 23.0 / 60.0;
  const double rel = std::abs(pt.eta_over_nalphas - target) / target;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "eta/(n alpha_s) = %.6f vs 23/60 = %.6f (rel %.2e, tol 1e-2), "
                "%.2f s/point (limit 10)",
                pt.eta_over_nalphas, target, rel, t1 - t0);
  return {rel <= 0.01 && (t1 - t0) < 10.0, buf};
}

Outcome criterion2() {
  const double t0 = now_s();
  ModelParams p;
  p.n_alpha_s = 1e-3;
  std::vector<double> zs = log_grid(1e-3, 1e-2, 8);
  // Linear least squares through the origin on the basis {z, z^2}; the
  // z-coefficient estimates the asymptotic slope. (The curve already bends
  // by ~7% at z = 0.01 from retardation, so a plain affine fit would
  // measure that bend, not the asymptote.)
  double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
  for (double z : zs) {
    p.z_over_lambda = z;
    const double y = eta(p).eta_over_nalphas;
    s11 += z * z;
    s12 += z * z * z;
    s22 += z * z * z * z;
    b1 += z * y;
    b2 += z * z * y;
  }
  const double det = s11 * s22 - s12 * s12;
  const double slope = (b1 * s22 - b2 * s12) / det;
  const double t1 = now_s();
  const double target = std::numbers::pi * std::numbers::pi / 3.0;
  const double rel = std::abs(slope - target) / target;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "short-distance slope %.5f vs pi^2/3 = %.5f (rel %.2e, tol "
                "2e-2), %.1f s total (limit 60)",
                slope, target, rel, t1 - t0);
  return {rel <= 0.02 && (t1 - t0) < 60.0, buf};
}

Outcome criterion3() {
  ModelParams p;
  p.eps_bg = 1e6;
  p.n_alpha_s = 0.0;
  p.z_over_lambda = 100.0;
  const PotentialResult r = reduction_factor(p);
  const double dev = std::abs(r.value - 1.0);
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "Ubar/U* = %.6f at eps=1e6, z=100 (|dev| %.2e, tol 1e-2)",
                r.value, dev);
  return {dev <= 0.01, buf};
}

Outcome criterion4() {
  ModelParams p;
  bool stat_ok = true;
  double max_point_s = 0.0;
  auto band_mean = [&](double zmin, double zmax, std::uint64_t seed0) {
    double sum = 0.0;
    const auto zs = log_grid(zmin, zmax, 5);
    for (std::size_t i = 0; i < zs.size(); ++i) {
      p.z_over_lambda = zs[i];
      const double t0 = now_s();
      const GammaPoint g = gamma_point(p, 1, seed0 + i, 0.02);
      max_point_s = std::max(max_point_s, now_s() - t0);
      stat_ok = stat_ok && g.stat_error <= 0.02 * g.gamma_scaled;
      sum += g.gamma_scaled;
    }
    return sum / static_cast<double>(zs.size());
  };
  const double a1 = band_mean(10.0, 100.0, 100);
  const double b1 = band_mean(1e-2, 1e-1, 200);
  const bool pass = std::abs(a1 - 0.7) <= 0.1 && std::abs(b1 - 0.5) <= 0.1 &&
                    stat_ok && max_point_s < 300.0;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "gamma*sqrt(n z^3): [10,100] mean %.4f (0.7 +/- 0.1), "
                "[0.01,0.1] mean %.4f (0.5 +/- 0.1), stat<=2%%: %s, max %.1f "
                "s/point",
                a1, b1, stat_ok ? "yes" : "NO", max_point_s);
  return {pass, buf};
}

Outcome criterion5() {
  ModelParams p;
  auto slope_of_sqrt_variance = [&](double zmin, double zmax,
                                    std::uint64_t seed0) {
    std::vector<std::pair<double, double>> pts;
    const auto zs = log_grid(zmin, zmax, 4);
    for (std::size_t i = 0; i < zs.size(); ++i) {
      p.z_over_lambda = zs[i];
      const auto v =
          variance_single(p, spec_for(std::uint64_t{1} << 17, seed0 + i, 0.02));
      pts.emplace_back(zs[i], std::sqrt(v.value));
    }
    return oracle::fit_power_law(pts).exponent;
  };
  const double s_long = slope_of_sqrt_variance(10.0, 100.0, 300);
  const double s_short = slope_of_sqrt_variance(1e-3, 1e-2, 400);
  const bool pass =
      std::abs(s_long + 5.5) <= 0.17 && std::abs(s_short + 4.5) <= 0.14;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "sqrt(<dU^2>) slopes: long %.4f (-5.5 +/- 0.17), short %.4f "
                "(-4.5 +/- 0.14)",
                s_long, s_short);
  return {pass, buf};
}

struct Gamma2Bands {
  double a2 = 0.0, b2 = 0.0;
  bool pass_a = false, pass_b = false;
};

Gamma2Bands gamma2_bands(BracketReading reading, std::uint64_t seed0) {
  ModelParams p;
  Gamma2Bands out;
  p.z_over_lambda = 10.0;
  const GammaPoint g_long = gamma_point(p, 2, seed0, 0.05,
                                        std::uint64_t{1} << 16, reading);
  out.a2 = g_long.gamma_scaled * std::pow(p.z_over_lambda, 3);
  out.pass_a = std::abs(out.a2 - 0.15) <= 0.05;
  p.z_over_lambda = 1e-2;
  const GammaPoint g_short = gamma_point(p, 2, seed0 + 1, 0.05,
                                         std::uint64_t{1} << 16, reading);
  out.b2 = g_short.gamma_scaled * p.z_over_lambda * p.z_over_lambda;
  out.pass_b = std::abs(out.b2 - 0.43) <= 0.07;
  return out;
}

Outcome criterion6() {
  const Gamma2Bands in_plane = gamma2_bands(BracketReading::InPlane, 500);
  const Gamma2Bands extra = gamma2_bands(BracketReading::ExtraSinTheta, 510);
  const bool inplane_pass = in_plane.pass_a && in_plane.pass_b;
  const bool extra_pass = extra.pass_a && extra.pass_b;
  // The two readings differ by well under 1% here, far below the band
  // widths, so they cannot be told apart empirically; the in-plane reading
  // is the default on analytic grounds and must satisfy both bands.
  char buf[320];
  std::snprintf(
      buf, sizeof(buf),
      "in-plane reading (default): a2 = %.4f (0.15 +/- 0.05), b2 = %.4f "
      "(0.43 +/- 0.07) -> %s; extra-sin reading: a2 = %.4f, b2 = %.4f -> "
      "%s (readings differ by <1%%: bands do not discriminate)",
      in_plane.a2, in_plane.b2, inplane_pass ? "pass" : "fail", extra.a2,
      extra.b2, extra_pass ? "pass" : "fail");
  return {inplane_pass, buf};
}

Outcome criterion7() {
  bool invariance_ok = true;
  double worst_pull = 0.0;
  for (double z : {0.1, 10.0}) {
    std::vector<GammaPoint> pts;
    std::uint64_t seed = 700;
    for (double nl3 : {1.0, 100.0})
      for (double nas : {1e-3, 1e-2}) {
        ModelParams p;
        p.n_lambda3 = nl3;
        p.n_alpha_s = nas;
        p.z_over_lambda = z;
        pts.push_back(gamma_point(p, 1, seed++, 0.02));
      }
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const double diff = std::abs(pts[i].gamma_scaled - pts[0].gamma_scaled);
      const double band = 3.0 * (pts[i].stat_error + pts[0].stat_error);
      worst_pull = std::max(worst_pull, diff / band);
      invariance_ok = invariance_ok && diff <= band;
    }
  }

  // hierarchy: gamma_2 / gamma < n alpha_s * O(1) at n alpha_s = 1e-2
  constexpr double kHierarchyO1 = 20.0;
  bool hierarchy_ok = true;
  double worst_ratio_over_nas = 0.0;
  ModelParams p;
  p.n_alpha_s = 1e-2;
  std::uint64_t seed = 750;
  for (double z : {1e-2, 1e-1, 1.0, 10.0, 100.0}) {
    p.z_over_lambda = z;
    const GammaPoint g1 = gamma_point(p, 1, seed++, 0.05);
    const GammaPoint g2 = gamma_point(p, 2, seed++, 0.05);
    const double gamma1 =
        g1.gamma_scaled / std::sqrt(p.density() * std::pow(p.z_a(), 3));
    const double gamma2 = g2.gamma_scaled * p.n_alpha_s / p.n_lambda3;
    const double ratio = gamma2 / gamma1;
    worst_ratio_over_nas = std::max(worst_ratio_over_nas, ratio / p.n_alpha_s);
    hierarchy_ok = hierarchy_ok && ratio < p.n_alpha_s * kHierarchyO1;
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "scaled gamma invariance worst pull %.2f (<=1), hierarchy "
                "max (gamma2/gamma)/n_alpha_s = %.2f (< %.0f)",
                worst_pull, worst_ratio_over_nas, kHierarchyO1);
  return {invariance_ok && hierarchy_ok, buf};
}

Outcome criterion8() {
  std::mt19937_64 rng(803);
  std::uniform_real_distribution<double> mag(0.05, 3.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  double worst = 0.0;
  for (int it = 0; it < 1000; ++it) {
    const double xi1 = mag(rng), xi2 = mag(rng);
    const double qa = mag(rng), qb = mag(rng), qd = mag(rng);
    const double phi = ang(rng), phip = ang(rng);
    const ModeQuad m = make_mode_quad(xi1, xi2, qa, qb, qd, phi, phip);
    const auto va = build_polarization_vectors(qa * std::cos(phip),
                                               qa * std::sin(phip), xi1,
                                               m.kappa_a, ModeDirection::Incoming);
    const auto vb = build_polarization_vectors(qb * std::cos(phi),
                                               qb * std::sin(phi), xi1,
                                               m.kappa_b, ModeDirection::Outgoing);
    const double cx = qa * std::cos(phip) - qb * std::cos(phi) + qd;
    const double cy = qa * std::sin(phip) - qb * std::sin(phi);
    const auto vc = build_polarization_vectors(cx, cy, xi2, m.kappa_c,
                                               ModeDirection::Incoming);
    const auto vd = build_polarization_vectors(qd, 0.0, xi2, m.kappa_d,
                                               ModeDirection::Outgoing);
    for (Pol x : kPols)
      for (Pol y : kPols) {
        const double t1 = eps_dot_ab(m, x, y);
        const double g1 = dot(x == Pol::TE ? va.te : va.tm,
                              y == Pol::TE ? vb.te : vb.tm)
                              .real();
        worst = std::max(worst,
                         std::abs(t1 - g1) / std::max(1.0, std::abs(t1)));
        const double t2 = eps_dot_cd(m, x, y);
        const double g2 = dot(x == Pol::TE ? vc.te : vc.tm,
                              y == Pol::TE ? vd.te : vd.tm)
                              .real();
        worst = std::max(worst,
                         std::abs(t2 - g2) / std::max(1.0, std::abs(t2)));
      }
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "16 closed forms vs geometric construction over 1000 draws: "
                "worst rel dev %.2e (tol 1e-12); TM-TM entry fixed as "
                "-((A kc kd) + qc qd)/xi2^2 with A = (qd - qb cos phi + qa "
                "cos phi')/qc",
                worst);
  return {worst <= 1e-12, buf};
}

Outcome criterion9() {
  // coverage of the replication error bars on known integrals
  int covered = 0, total = 0;
  const double per_dim =
      std::sqrt(std::numbers::pi / 8.0) * std::erf(std::sqrt(2.0));
  const double truths[2] = {std::pow(0.5, 7), std::pow(per_dim, 7)};
  for (int s = 0; s < 100; ++s) {
    auto spec = spec_for(std::uint64_t{1} << 13, 9000 + s, 1.0);
    spec.dim = 7;
    spec.replications = 8;
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
    const quad::IntegralEstimate rs[2] = {quad::integrate_qmc(prod, spec),
                                          quad::integrate_qmc(bump, spec)};
    for (int i = 0; i < 2; ++i) {
      ++total;
      if (std::abs(rs[i].value - truths[i]) <= 3.0 * rs[i].std_error)
        ++covered;
    }
  }
  const double frac = 100.0 * covered / total;

  // bitwise determinism across worker counts on the physics integrand
  ModelParams p;
  p.z_over_lambda = 1.0;
  double v1 = 0, v2 = 0, v4 = 0;
  {
    auto spec = spec_for(std::uint64_t{1} << 14, 77, 1.0);
    spec.threads = 1;
    v1 = variance_single(p, spec).value;
    spec.threads = 2;
    v2 = variance_single(p, spec).value;
    spec.threads = 4;
    v4 = variance_single(p, spec).value;
  }
  const bool deterministic = (v1 == v2) && (v2 == v4);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "error-bar coverage %.0f%% (>= 95%%), worker determinism "
                "1/2/4: %s",
                frac, deterministic ? "bitwise identical" : "MISMATCH");
  return {frac >= 95.0 && deterministic, buf};
}

Outcome criterion10() {
  ModelParams p;
  bool all_ok = true;
  std::string detail = "QMC vs 12^7 grid: ";
  for (double z : {0.1, 1.0, 10.0}) {
    p.z_over_lambda = z;
    const auto qmc =
        variance_single(p, spec_for(std::uint64_t{1} << 17, 1010, 0.02));
    const auto grid = oracle::variance_single_bruteforce(p, 12, g_threads);
    const double diff = std::abs(qmc.value - grid.value);
    const double band = 3.0 * (qmc.std_error + grid.error);
    all_ok = all_ok && diff <= band;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "z=%g: |d| = %.2e vs %.2e%s; ", z, diff,
                  band, diff <= band ? "" : " FAIL");
    detail += buf;
  }
  return {all_ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  if (const char* env = std::getenv("CASIMIR_THREADS")) g_threads = std::atoi(env);

  struct Entry {
    int id;
    const char* name;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {1, "eta long-distance constant", criterion1},
      {2, "eta short-distance slope", criterion2},
      {3, "perfect-mirror recovery", criterion3},
      {4, "single-scattering asymptotes", criterion4},
      {5, "fluctuation power laws", criterion5},
      {6, "double-scattering asymptotes", criterion6},
      {7, "scaling invariances", criterion7},
      {8, "polarization oracle", criterion8},
      {9, "quadrature calibration", criterion9},
      {10, "cross-method agreement", criterion10},
  };

  int failures = 0;
  for (const Entry& e : entries) {
    if (only != 0 && e.id != only) continue;
    const double t0 = now_s();
    const Outcome r = e.fn();
    const double dt = now_s() - t0;
    std::printf("criterion %2d [%s] %-32s (%.1f s) %s\n", e.id,
                r.pass ? "PASS" : "FAIL", e.name, dt, r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  if (failures == 0)
    std::printf("acceptance: all criteria passed\n");
  else
    std::printf("acceptance: %d criterion(s) FAILED\n", failures);
  return failures;
}
