#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "casimir/model.hpp"
#include "casimir/quad/qmc.hpp"
#include "casimir/version.hpp"

namespace casimir::io {

using json = nlohmann::ordered_json;

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[i] = digits[v & 0xF];
  return out;
}

/// Full record of how a data file was produced: parameters, cubature
/// request, seeds and the convention switches of the double-scattering
/// path. Serialized into every CSV header; wall time is reported on stderr
/// only so fixed-seed reruns stay byte-identical.
struct RunManifest {
  std::string tool = kToolName;
  std::string version = kToolVersion;
  std::string command;
  ModelParams params;
  quad::QuadSpec quad;
  std::string bracket_reading = "inplane";   // or "extra-sin"
  std::string double_factor2 = "summed";     // or "apply2"
  double zmin = 0.0, zmax = 0.0;             // curve grid (0 when unused)
  int points = 0;
  int order = 0;                             // gamma order (0 when unused)
  double wall_time_s = 0.0;                  // not serialized

  json to_json() const {
    json j;
    j["tool"] = tool;
    j["version"] = version;
    j["command"] = command;
    if (points > 0)
      j["grid"] = {{"zmin", zmin}, {"zmax", zmax}, {"points", points}};
    if (order > 0) j["order"] = order;
    j["params"] = {{"alpha0", params.alpha0},
                   {"omega_a", params.omega_a},
                   {"eps_bg", params.eps_bg},
                   {"n_alpha_s", params.n_alpha_s},
                   {"n_lambda3", params.n_lambda3},
                   {"z_over_lambda", params.z_over_lambda}};
    json tr = json::array();
    for (const auto& t : quad.transforms)
      tr.push_back({{"family", t.family_name()}, {"mu", t.mu}});
    j["quad"] = {{"dim", quad.dim},
                 {"budget", quad.budget},
                 {"replications", quad.replications},
                 {"seed", quad.seed},
                 {"target_rel_error", quad.target_rel_error},
                 {"transforms", tr}};
    j["switches"] = {{"bracket_reading", bracket_reading},
                     {"double_factor2", double_factor2}};
    return j;
  }

  static RunManifest from_json(const json& j) {
    RunManifest m;
    m.tool = j.value("tool", "");
    m.version = j.value("version", "");
    m.command = j.value("command", "");
    if (j.contains("grid")) {
      m.zmin = j["grid"].value("zmin", 0.0);
      m.zmax = j["grid"].value("zmax", 0.0);
      m.points = j["grid"].value("points", 0);
    }
    m.order = j.value("order", 0);
    if (j.contains("params")) {
      const json& p = j["params"];
      m.params.alpha0 = p.value("alpha0", 1.0);
      m.params.omega_a = p.value("omega_a", 1.0);
      m.params.eps_bg = p.value("eps_bg", 1.0);
      m.params.n_alpha_s = p.value("n_alpha_s", 1e-3);
      m.params.n_lambda3 = p.value("n_lambda3", 1.0);
      m.params.z_over_lambda = p.value("z_over_lambda", 1.0);
    }
    if (j.contains("quad")) {
      const json& q = j["quad"];
      m.quad.dim = q.value("dim", 1);
      m.quad.budget = q.value("budget", std::uint64_t{1} << 21);
      m.quad.replications = q.value("replications", 16);
      m.quad.seed = q.value("seed", std::uint64_t{0});
      m.quad.target_rel_error = q.value("target_rel_error", 0.02);
    }
    if (j.contains("switches")) {
      m.bracket_reading = j["switches"].value("bracket_reading", "inplane");
      m.double_factor2 = j["switches"].value("double_factor2", "summed");
    }
    return m;
  }

  /// Content hash of the serialized manifest (FNV-1a 64).
  std::string config_hash() const { return hex64(fnv1a64(to_json().dump())); }
};

}  // namespace casimir::io
