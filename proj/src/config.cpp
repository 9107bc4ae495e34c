#include "stripdirac/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "stripdirac/common.hpp"

namespace sd {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
  throw ConfigError("config: " + msg);
}

void check_keys(const json& j, const char* where,
                std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) fail(std::string("unknown key \"") + it.key() + "\" in " + where);
  }
}

double get_num(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) fail(std::string(key) + " must be a number");
  return j[key].get<double>();
}

int get_int(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer())
    fail(std::string(key) + " must be an integer");
  return j[key].get<int>();
}

bool get_bool(const json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) fail(std::string(key) + " must be a boolean");
  return j[key].get<bool>();
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(delta > 0.0)) fail("delta must be positive");
  if (h.empty()) fail("h ladder must be nonempty");
  for (double v : h)
    if (!(v > 0.0)) fail("h values must be positive");
  for (size_t i = 1; i < h.size(); ++i)
    if (!(h[i] < h[i - 1])) fail("h ladder must be sorted strictly descending");
  profile.validate();
  if (!(std::abs(profile.amp) * delta < 1.0))
    fail("curvature amplitude too large for the strip width (need "
         "|amp| * delta < 1)");
  const double Leff = L > 0.0 ? L : profile.L0 + 6.0 * delta;
  if (!(Leff >= profile.L0))
    fail("strip half-length L must contain the curved section");
  if (ns < 7 || nt < 7) fail("grid must be at least 7 x 7");
  if (fiber.n < 8) fail("fiber basis size too small");
  if (fiber.nq < fiber.n) fail("fiber quadrature must resolve the basis");
  if (fiber.branches < 1) fail("need at least one dispersion branch");
  if (fiber.nxi < 3) fail("need at least 3 xi samples");
  if (fiber.window < 0.0) fail("xi window must be nonnegative");
  if (hardy.M < 2 || hardy.M > 48) fail("hardy basis size out of range");
  if (hardy.k_max < 1 || hardy.k_max > 6) fail("k_max out of range");
  if (hardy.M < hardy.k_max + 8)
    fail("hardy basis needs M >= k_max + 8 for truncation headroom");
  if (hardy.nq_boundary < 201 || hardy.nq_boundary % 2 == 0)
    fail("hardy boundary rule must be odd and >= 201");
  if (hardy.nq_circle < 4 * (hardy.k_max + 1) + 8)
    fail("hardy circle rule too small");
  if (!(halfline.T > 0.0)) fail("half-line truncation must be positive");
  if (halfline.n < 10) fail("half-line basis too small");
  if (!(tolerances.cr_warn > 0.0) || !(tolerances.trunc_warn > 0.0))
    fail("warning tolerances must be positive");
  if (out_dir.empty()) fail("output directory must be nonempty");
}

TubularMap ExperimentConfig::make_map() const {
  const double Leff = L > 0.0 ? L : profile.L0 + 6.0 * delta;
  return TubularMap(Curve(profile, Leff), delta);
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) fail("top level must be an object");
  check_keys(j, "the top level",
             {"delta", "h", "profile", "L", "grid", "fiber", "hardy",
              "halfline", "effective", "tolerances", "out_dir"});

  ExperimentConfig cfg;
  if (!j.contains("delta") || !j.contains("h"))
    fail("delta and h are required");
  cfg.delta = get_num(j, "delta", 0.0);
  if (!j["h"].is_array()) fail("h must be an array");
  for (const auto& v : j["h"]) {
    if (!v.is_number()) fail("h entries must be numbers");
    cfg.h.push_back(v.get<double>());
  }
  if (j.contains("profile")) {
    const json& p = j["profile"];
    if (!p.is_object()) fail("profile must be an object");
    check_keys(p, "profile", {"amp", "w", "L0", "ramp"});
    cfg.profile.amp = get_num(p, "amp", cfg.profile.amp);
    cfg.profile.w = get_num(p, "w", cfg.profile.w);
    cfg.profile.L0 = get_num(p, "L0", cfg.profile.L0);
    cfg.profile.ramp = get_num(p, "ramp", cfg.profile.ramp);
  }
  cfg.L = get_num(j, "L", 0.0);
  if (j.contains("grid")) {
    const json& g = j["grid"];
    if (!g.is_object()) fail("grid must be an object");
    check_keys(g, "grid", {"ns", "nt"});
    cfg.ns = get_int(g, "ns", cfg.ns);
    cfg.nt = get_int(g, "nt", cfg.nt);
  }
  if (j.contains("fiber")) {
    const json& f = j["fiber"];
    if (!f.is_object()) fail("fiber must be an object");
    check_keys(f, "fiber", {"n", "nq", "branches", "nxi", "window"});
    cfg.fiber.n = get_int(f, "n", cfg.fiber.n);
    cfg.fiber.nq = get_int(f, "nq", cfg.fiber.nq);
    cfg.fiber.branches = get_int(f, "branches", cfg.fiber.branches);
    cfg.fiber.nxi = get_int(f, "nxi", cfg.fiber.nxi);
    cfg.fiber.window = get_num(f, "window", cfg.fiber.window);
  }
  if (j.contains("hardy")) {
    const json& hj = j["hardy"];
    if (!hj.is_object()) fail("hardy must be an object");
    check_keys(hj, "hardy", {"M", "k_max", "nq_boundary", "nq_circle"});
    cfg.hardy.M = get_int(hj, "M", cfg.hardy.M);
    cfg.hardy.k_max = get_int(hj, "k_max", cfg.hardy.k_max);
    cfg.hardy.nq_boundary = get_int(hj, "nq_boundary", cfg.hardy.nq_boundary);
    cfg.hardy.nq_circle = get_int(hj, "nq_circle", cfg.hardy.nq_circle);
  }
  if (j.contains("halfline")) {
    const json& hl = j["halfline"];
    if (!hl.is_object()) fail("halfline must be an object");
    check_keys(hl, "halfline", {"T", "n"});
    cfg.halfline.T = get_num(hl, "T", cfg.halfline.T);
    cfg.halfline.n = get_int(hl, "n", cfg.halfline.n);
  }
  if (j.contains("effective")) {
    const json& e = j["effective"];
    if (!e.is_object()) fail("effective must be an object");
    check_keys(e, "effective", {"synthetic"});
    cfg.effective.synthetic = get_bool(e, "synthetic", false);
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) fail("tolerances must be an object");
    check_keys(t, "tolerances", {"cr_warn", "trunc_warn"});
    cfg.tolerances.cr_warn = get_num(t, "cr_warn", cfg.tolerances.cr_warn);
    cfg.tolerances.trunc_warn =
        get_num(t, "trunc_warn", cfg.tolerances.trunc_warn);
  }
  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string()) fail("out_dir must be a string");
    cfg.out_dir = j["out_dir"].get<std::string>();
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open \"" + path + "\"");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON in \"") + path + "\": " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["delta"] = cfg.delta;
  j["h"] = cfg.h;
  j["profile"] = {{"amp", cfg.profile.amp},
                  {"w", cfg.profile.w},
                  {"L0", cfg.profile.L0},
                  {"ramp", cfg.profile.ramp}};
  j["L"] = cfg.L > 0.0 ? cfg.L : cfg.profile.L0 + 6.0 * cfg.delta;
  j["grid"] = {{"ns", cfg.ns}, {"nt", cfg.nt}};
  j["fiber"] = {{"n", cfg.fiber.n},
                {"nq", cfg.fiber.nq},
                {"branches", cfg.fiber.branches},
                {"nxi", cfg.fiber.nxi},
                {"window", cfg.fiber.window}};
  j["hardy"] = {{"M", cfg.hardy.M},
                {"k_max", cfg.hardy.k_max},
                {"nq_boundary", cfg.hardy.nq_boundary},
                {"nq_circle", cfg.hardy.nq_circle}};
  j["halfline"] = {{"T", cfg.halfline.T}, {"n", cfg.halfline.n}};
  j["effective"] = {{"synthetic", cfg.effective.synthetic}};
  j["tolerances"] = {{"cr_warn", cfg.tolerances.cr_warn},
                     {"trunc_warn", cfg.tolerances.trunc_warn}};
  j["out_dir"] = cfg.out_dir;
  return j;
}

uint64_t fnv1a64(std::string_view s) {
  uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string config_hash(const ExperimentConfig& cfg) {
  // Identify the experiment, not the destination: two runs of the same
  // parameters into different output directories must share a hash.
  nlohmann::json j = config_to_json(cfg);
  j.erase("out_dir");
  const uint64_t v = fnv1a64(j.dump());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(v));
  return std::string(buf);
}

json manifest_to_json(const RunManifest& m) {
  json j;
  j["config_hash"] = m.config_hash;
  j["versions"] = m.versions;
  j["wall_ms"] = m.wall_ms;
  j["warnings"] = m.warnings;
  return j;
}

const std::map<std::string, std::string>& module_versions() {
  static const std::map<std::string, std::string> v = {
      {"stripdirac", "1.0.0"},   {"curve_geometry", "1.0"},
      {"magnetic_potential", "1.0"}, {"fibered_dirac", "1.0"},
      {"strip_hardy", "1.0"},    {"conformal_map", "1.0"},
      {"effective_spectrum", "1.0"}, {"spectra_cli", "1.0"}};
  return v;
}

}  // namespace sd
