// Command-line front end: curve computation for the reduction factor and
// the fluctuation observables, asymptote fitting, and the self-check suite.
//
// Exit codes: 0 success, 1 verification failure, 2 flagged estimate,
// 64 usage error, 65 unusable input data, 74 I/O failure.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "casimir/average_potential.hpp"
#include "casimir/io/csv.hpp"
#include "casimir/io/manifest.hpp"
#include "casimir/model.hpp"
#include "casimir/variance_double.hpp"
#include "casimir/variance_single.hpp"
#include "casimir/verify.hpp"
#include "casimir/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitFlagged = 2;
constexpr int kExitUsage = 64;
constexpr int kExitBadData = 65;
constexpr int kExitIo = 74;

using casimir::io::json;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config " + path);
  json j;
  in >> j;
  return j;
}

/// flags > config file > defaults
template <typename T>
void merge(const CLI::Option* opt, const json& cfg, const char* key, T& value) {
  if (opt != nullptr && opt->count() > 0) return;  // flag wins
  if (cfg.contains(key)) value = cfg[key].get<T>();
}

std::vector<double> log_grid(double zmin, double zmax, int points) {
  std::vector<double> z(points);
  if (points == 1) {
    z[0] = zmin;
    return z;
  }
  const double r = std::log(zmax / zmin) / (points - 1);
  for (int i = 0; i < points; ++i) z[i] = zmin * std::exp(r * i);
  return z;
}

struct CommonArgs {
  double zmin = 1e-2, zmax = 1e2;
  int points = 20;
  double eps_bg = 1.0;
  double n_alpha_s = 1e-3;
  double n_lambda3 = 1.0;
  std::string out = "-";
  int threads = 0;
};

int run_eta(const CommonArgs& a) {
  if (a.points < 2 || !(a.zmin < a.zmax)) {
    std::cerr << "eta: need --points >= 2 and zmin < zmax\n";
    return kExitUsage;
  }
  Timer timer;
  casimir::ModelParams p;
  p.eps_bg = a.eps_bg;
  p.n_alpha_s = a.n_alpha_s;
  p.n_lambda3 = a.n_lambda3;
  if (p.diluteness_warning())
    std::cerr << "warning: n_alpha_s = " << p.n_alpha_s
              << " is outside the dilute regime\n";

  casimir::io::RunManifest man;
  man.command = "eta";
  man.params = p;
  man.quad.dim = 2;
  man.quad.budget = 0;
  man.quad.replications = 0;
  man.zmin = a.zmin;
  man.zmax = a.zmax;
  man.points = a.points;

  casimir::io::CsvDocument doc;
  doc.manifest = man;
  doc.columns = {"z_over_lambda", "eta_over_nalphas", "abs_error", "status"};
  bool any_flagged = false;
  for (double z : log_grid(a.zmin, a.zmax, a.points)) {
    p.z_over_lambda = z;
    const casimir::EtaPoint pt = casimir::eta(p);
    any_flagged = any_flagged || !pt.converged;
    doc.add_row({casimir::io::fmt12(pt.z_over_lambda),
                 casimir::io::fmt12(pt.eta_over_nalphas),
                 casimir::io::fmt12(pt.abs_error),
                 pt.converged ? "ok" : "flagged"});
  }
  casimir::io::write_text_file(a.out, doc.serialize());
  std::cerr << "# wall-time-s: " << timer.seconds() << "\n";
  return any_flagged ? kExitFlagged : kExitOk;
}

struct GammaArgs {
  CommonArgs common;
  int order = 1;
  std::uint64_t budget = std::uint64_t{1} << 21;
  int replications = 16;
  std::uint64_t seed = 0;
  std::string bracket_reading = "inplane";
  std::string double_factor2 = "summed";
};

int run_gamma(const GammaArgs& a) {
  if (a.common.points < 2 || !(a.common.zmin < a.common.zmax)) {
    std::cerr << "gamma: need --points >= 2 and zmin < zmax\n";
    return kExitUsage;
  }
  if (a.order != 1 && a.order != 2) {
    std::cerr << "gamma: --order must be 1 or 2\n";
    return kExitUsage;
  }
  if (a.bracket_reading != "inplane" && a.bracket_reading != "extra-sin") {
    std::cerr << "gamma: --bracket-reading must be inplane or extra-sin\n";
    return kExitUsage;
  }
  if (a.double_factor2 != "summed" && a.double_factor2 != "apply2") {
    std::cerr << "gamma: --double-factor2 must be summed or apply2\n";
    return kExitUsage;
  }
  Timer timer;
  casimir::ModelParams p;
  p.eps_bg = a.common.eps_bg;
  p.n_alpha_s = a.common.n_alpha_s;
  p.n_lambda3 = a.common.n_lambda3;
  if (p.diluteness_warning())
    std::cerr << "warning: n_alpha_s = " << p.n_alpha_s
              << " is outside the dilute regime\n";

  casimir::quad::QuadSpec spec;
  spec.budget = a.budget;
  spec.replications = a.replications;
  spec.seed = a.seed;
  spec.threads = a.common.threads;

  const auto reading = a.bracket_reading == "inplane"
                           ? casimir::BracketReading::InPlane
                           : casimir::BracketReading::ExtraSinTheta;
  const bool factor2 = a.double_factor2 == "apply2";

  casimir::io::RunManifest man;
  man.command = a.order == 1 ? "gamma1" : "gamma2";
  man.params = p;
  man.quad = spec;
  man.quad.dim = a.order == 1 ? 7 : 9;
  man.bracket_reading = a.bracket_reading;
  man.double_factor2 = a.double_factor2;
  man.zmin = a.common.zmin;
  man.zmax = a.common.zmax;
  man.points = a.common.points;
  man.order = a.order;

  casimir::io::CsvDocument doc;
  doc.manifest = man;
  doc.columns = {"z_over_lambda", "scaled_value", "std_error",
                 "n_samples",     "seed",         "status"};
  bool any_flagged = false;
  for (double z : log_grid(a.common.zmin, a.common.zmax, a.common.points)) {
    p.z_over_lambda = z;
    const casimir::GammaPoint g =
        a.order == 1 ? casimir::gamma_single(p, spec)
                     : casimir::gamma_double(p, spec, reading, factor2);
    any_flagged = any_flagged || !g.converged;
    doc.add_row({casimir::io::fmt12(g.z_over_lambda),
                 casimir::io::fmt12(g.gamma_scaled),
                 casimir::io::fmt12(g.stat_error), std::to_string(g.n_samples),
                 std::to_string(g.seed), g.converged ? "ok" : "flagged"});
  }
  casimir::io::write_text_file(a.common.out, doc.serialize());
  std::cerr << "# wall-time-s: " << timer.seconds() << "\n";
  return any_flagged ? kExitFlagged : kExitOk;
}

int run_fit(const std::string& input, const std::string& regime) {
  if (regime != "short" && regime != "long") {
    std::cerr << "fit-asymptotes: --regime must be short or long\n";
    return kExitUsage;
  }
  std::ifstream in(input);
  if (!in) {
    std::cerr << "fit-asymptotes: cannot open " << input << "\n";
    return kExitIo;
  }
  casimir::io::CsvDocument doc;
  try {
    doc = casimir::io::CsvDocument::parse(in);
  } catch (const std::exception& e) {
    std::cerr << "fit-asymptotes: " << e.what() << "\n";
    return kExitBadData;
  }
  std::vector<double> z, y, sy;
  try {
    z = doc.column_as_double("z_over_lambda");
    y = doc.column_as_double("scaled_value");
    sy = doc.column_as_double("std_error");
  } catch (const std::exception& e) {
    std::cerr << "fit-asymptotes: " << e.what() << "\n";
    return kExitBadData;
  }
  const int order = doc.manifest.order > 0 ? doc.manifest.order : 1;

  // Plateau variable in the requested regime; for the double-scattering
  // curve the figure-axis values are rescaled to the constants' units.
  std::vector<double> val, err;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const bool in_window = regime == "long" ? z[i] >= 10.0 : z[i] <= 0.1;
    if (!in_window) continue;
    double scale = 1.0;
    if (order == 2) scale = regime == "long" ? std::pow(z[i], 3) : z[i] * z[i];
    val.push_back(y[i] * scale);
    err.push_back(sy[i] * scale);
  }
  if (val.size() < 4) {
    std::cerr << "fit-asymptotes: need at least 4 points in the " << regime
              << " window, found " << val.size() << "\n";
    return kExitBadData;
  }
  const double n = static_cast<double>(val.size());
  double mean = 0.0;
  for (double v : val) mean += v;
  mean /= n;
  double scatter = 0.0, prop = 0.0;
  for (std::size_t i = 0; i < val.size(); ++i) {
    scatter += (val[i] - mean) * (val[i] - mean);
    prop += err[i] * err[i];
  }
  const double sem_scatter = std::sqrt(scatter / (n * (n - 1.0)));
  const double sem_prop = std::sqrt(prop) / n;
  const double ci95 = 1.96 * std::max(sem_scatter, sem_prop);

  json out;
  out["constant"] = mean;
  out["ci95"] = ci95;
  out["n_points"] = val.size();
  out["regime"] = regime;
  out["order"] = order;
  std::cout << out.dump() << "\n";
  return kExitOk;
}

int run_verify(const std::string& level, int threads) {
  if (level != "fast" && level != "full") {
    std::cerr << "verify: --level must be fast or full\n";
    return kExitUsage;
  }
  Timer timer;
  const auto results = casimir::run_verification(level, threads);
  bool all_pass = true;
  std::size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.name.size());
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
              << std::string(width - r.name.size() + 2, ' ') << r.detail
              << "\n";
  }
  std::cout << (all_pass ? "verify: all checks passed"
                         : "verify: FAILURES present")
            << " (" << casimir::io::fmt12(timer.seconds()) << " s)\n";
  return all_pass ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(casimir::kToolName) +
               ": Casimir-Polder statistics above a dilute disordered "
               "dielectric"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flags override)");

  CommonArgs eta_args;
  auto* eta_cmd = app.add_subcommand("eta", "reduction-factor curve -> CSV");
  auto* eo_zmin = eta_cmd->add_option("--zmin", eta_args.zmin);
  auto* eo_zmax = eta_cmd->add_option("--zmax", eta_args.zmax);
  auto* eo_pts = eta_cmd->add_option("--points", eta_args.points);
  auto* eo_eps = eta_cmd->add_option("--eps-bg", eta_args.eps_bg);
  auto* eo_nas = eta_cmd->add_option("--n-alpha-s", eta_args.n_alpha_s);
  auto* eo_nl3 = eta_cmd->add_option("--n-lambda3", eta_args.n_lambda3);
  auto* eo_out = eta_cmd->add_option("--out", eta_args.out, "output file or -");
  auto* eo_thr = eta_cmd->add_option("--threads", eta_args.threads);

  GammaArgs g_args;
  auto* g_cmd = app.add_subcommand(
      "gamma", "relative-fluctuation curve (order 1 or 2) -> CSV");
  auto* go_ord = g_cmd->add_option("--order", g_args.order, "1: single, 2: double");
  auto* go_zmin = g_cmd->add_option("--zmin", g_args.common.zmin);
  auto* go_zmax = g_cmd->add_option("--zmax", g_args.common.zmax);
  auto* go_pts = g_cmd->add_option("--points", g_args.common.points);
  auto* go_nas = g_cmd->add_option("--n-alpha-s", g_args.common.n_alpha_s);
  auto* go_nl3 = g_cmd->add_option("--n-lambda3", g_args.common.n_lambda3);
  auto* go_bud = g_cmd->add_option("--budget", g_args.budget,
                                   "samples per randomization (power of 2)");
  auto* go_rep = g_cmd->add_option("--replications", g_args.replications);
  auto* go_seed = g_cmd->add_option("--seed", g_args.seed);
  auto* go_out = g_cmd->add_option("--out", g_args.common.out);
  auto* go_thr = g_cmd->add_option("--threads", g_args.common.threads);
  auto* go_br = g_cmd->add_option("--bracket-reading", g_args.bracket_reading,
                                  "inplane|extra-sin");
  auto* go_f2 = g_cmd->add_option("--double-factor2", g_args.double_factor2,
                                  "summed|apply2");

  std::string fit_input, fit_regime;
  auto* fit_cmd = app.add_subcommand("fit-asymptotes",
                                     "plateau constant of a gamma CSV -> JSON");
  fit_cmd->add_option("--input", fit_input)->required();
  fit_cmd->add_option("--regime", fit_regime, "short|long")->required();

  std::string verify_level = "fast";
  int verify_threads = 0;
  auto* verify_cmd = app.add_subcommand("verify", "run the self-check suite");
  verify_cmd->add_option("--level", verify_level, "fast|full");
  verify_cmd->add_option("--threads", verify_threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    const json cfg = load_config(config_path);

    if (eta_cmd->parsed()) {
      merge(eo_zmin, cfg, "zmin", eta_args.zmin);
      merge(eo_zmax, cfg, "zmax", eta_args.zmax);
      merge(eo_pts, cfg, "points", eta_args.points);
      merge(eo_eps, cfg, "eps_bg", eta_args.eps_bg);
      merge(eo_nas, cfg, "n_alpha_s", eta_args.n_alpha_s);
      merge(eo_nl3, cfg, "n_lambda3", eta_args.n_lambda3);
      merge(eo_out, cfg, "out", eta_args.out);
      merge(eo_thr, cfg, "threads", eta_args.threads);
      return run_eta(eta_args);
    }
    if (g_cmd->parsed()) {
      merge(go_ord, cfg, "order", g_args.order);
      merge(go_zmin, cfg, "zmin", g_args.common.zmin);
      merge(go_zmax, cfg, "zmax", g_args.common.zmax);
      merge(go_pts, cfg, "points", g_args.common.points);
      merge(go_nas, cfg, "n_alpha_s", g_args.common.n_alpha_s);
      merge(go_nl3, cfg, "n_lambda3", g_args.common.n_lambda3);
      merge(go_bud, cfg, "budget", g_args.budget);
      merge(go_rep, cfg, "replications", g_args.replications);
      merge(go_seed, cfg, "seed", g_args.seed);
      merge(go_out, cfg, "out", g_args.common.out);
      merge(go_thr, cfg, "threads", g_args.common.threads);
      merge(go_br, cfg, "bracket_reading", g_args.bracket_reading);
      merge(go_f2, cfg, "double_factor2", g_args.double_factor2);
      return run_gamma(g_args);
    }
    if (fit_cmd->parsed()) return run_fit(fit_input, fit_regime);
    if (verify_cmd->parsed()) return run_verify(verify_level, verify_threads);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadData;
  }
  return kExitUsage;
}
