#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stripdirac/geometry.hpp"

namespace sd {

/// Fibered-operator solver options shared by the dispersion and threshold
/// commands.
struct FiberOptions {
  int n = 64;           ///< Galerkin basis size per fiber
  int nq = 240;         ///< assembly quadrature nodes
  int branches = 4;     ///< dispersion branches per sign
  int nxi = 121;        ///< xi samples of the dispersion sweep
  double window = 0.0;  ///< xi half-window; 0 = automatic
};

/// Hardy/Bargmann basis options of the effective-spectrum command.
struct HardyOptions {
  int M = 14;             ///< disk-monomial basis size
  int k_max = 3;          ///< number of effective levels
  int nq_boundary = 4001; ///< boundary Simpson rule (odd)
  int nq_circle = 256;    ///< Cauchy circle rule
};

/// Half-line model options (the universal constant a0).
struct HalflineOptions {
  double T = 14.0;  ///< half-line truncation
  int n = 110;      ///< basis size
};

struct EffectiveOptions {
  /// Replace the potential exponent by its exact Hessian quadratic
  /// (constants-validation mode).
  bool synthetic = false;
};

/// Gates above which a run is flagged in the manifest warnings.
struct ToleranceOptions {
  double cr_warn = 1e-2;     ///< conformal consistency residual
  double trunc_warn = 0.05;  ///< effective-spectrum truncation sensitivity
};

/// One experiment: geometry, semiclassical ladder, solver resolutions.
struct ExperimentConfig {
  double delta = 1.0;
  std::vector<double> h;           ///< sorted strictly descending
  CurveProfile profile{0.0, 1.0, 2.0, 1.0};
  double L = 0.0;                  ///< strip half-length; 0 = L0 + 6 delta
  int ns = 201;                    ///< potential / conformal s-grid
  int nt = 41;                     ///< potential / conformal t-grid
  FiberOptions fiber;
  HardyOptions hardy;
  HalflineOptions halfline;
  EffectiveOptions effective;
  ToleranceOptions tolerances;
  std::string out_dir = "out";

  /// Throws ConfigError on any violated invariant.
  void validate() const;

  /// Tubular chart of the configured geometry.
  TubularMap make_map() const;
};

/// Parse + validate; unknown keys are rejected (schema is closed).
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Canonical serialization of the resolved config (defaults filled in);
/// hashing this makes configs that resolve identically hash identically.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

uint64_t fnv1a64(std::string_view s);

/// 16-hex-digit FNV-1a hash of the canonical serialization.
std::string config_hash(const ExperimentConfig& cfg);

/// Reproducibility envelope written next to every report.
struct RunManifest {
  std::string config_hash;
  std::map<std::string, std::string> versions;
  std::map<std::string, double> wall_ms;  ///< per-command wall time
  std::vector<std::string> warnings;
};

nlohmann::json manifest_to_json(const RunManifest& m);

const std::map<std::string, std::string>& module_versions();

}  // namespace sd
