#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stripdirac/config.hpp"
#include "stripdirac/reports.hpp"
#include "stripdirac/svgplot.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sd;

namespace {

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

std::string h_tag(double h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", h);
  return std::string(buf);
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cli: cannot write \"" + path.string() + "\"");
  out << j.dump(2) << "\n";
}

void note(const fs::path& path) { std::cout << "wrote " << path.string() << "\n"; }

json run_dispersion(const ExperimentConfig& cfg, RunManifest& man,
                    double h_override) {
  Stopwatch sw;
  std::vector<double> hs = h_override > 0.0 ? std::vector<double>{h_override}
                                            : cfg.h;
  const int K = cfg.fiber.branches;
  json runs = json::array();
  for (double h : hs) {
    fiber::DispersionCurve dc =
        fiber::dispersion_sweep(h, cfg.delta, K, cfg.fiber.nxi,
                                cfg.fiber.window, cfg.fiber.n, cfg.fiber.nq);
    fiber::Threshold tp =
        fiber::threshold_pos(h, cfg.delta, cfg.fiber.n, cfg.fiber.nq);
    fiber::Threshold tn =
        fiber::threshold_neg(h, cfg.delta, cfg.fiber.n, cfg.fiber.nq);

    const std::string base = "dispersion_h" + h_tag(h);
    const fs::path csv_path = fs::path(cfg.out_dir) / (base + ".csv");
    write_text_file(csv_path.string(), dispersion_csv(dc));
    note(csv_path);

    std::vector<SvgSeries> series;
    for (int k = 0; k < K; ++k)
      series.push_back({"pos " + std::to_string(k + 1), dc.xi,
                        Vec(dc.pos.col(k))});
    for (int k = 0; k < K; ++k)
      series.push_back({"neg " + std::to_string(k + 1), dc.xi,
                        Vec(-dc.neg.col(k))});
    SvgBand band{-tn.lambda_ess, tp.lambda_ess, "spectral gap"};
    const fs::path svg_path = fs::path(cfg.out_dir) / (base + ".svg");
    write_line_chart(svg_path.string(),
                     "dispersion curves, h = " + h_tag(h), "xi", "lambda",
                     series, band);
    note(svg_path);

    runs.push_back({{"h", h},
                    {"csv", base + ".csv"},
                    {"svg", base + ".svg"},
                    {"branches", K},
                    {"lambda_ess_pos", tp.lambda_ess},
                    {"lambda_ess_neg", tn.lambda_ess}});
  }
  man.wall_ms["dispersion"] = sw.ms();
  json j;
  j["runs"] = runs;
  j["conventions"] = {
      {"csv_columns", "xi, pos_1..pos_K (positive branches), neg_1..neg_K "
                      "(|mu_k^-|, plotted negative)"},
      {"gap_band", "[-lambda_ess_neg, +lambda_ess_pos]"},
      {"log_scale", false}};
  return j;
}

json run_thresholds(const ExperimentConfig& cfg, RunManifest& man) {
  Stopwatch sw;
  json j = thresholds_report(cfg);
  man.wall_ms["thresholds"] = sw.ms();
  return j;
}

json run_a0(const ExperimentConfig& cfg, RunManifest& man) {
  Stopwatch sw;
  fiber::HalflineResult hl =
      fiber::halfline_a0(cfg.halfline.T, cfg.halfline.n);
  man.wall_ms["a0"] = sw.ms();
  json j;
  j["a0"] = hl.a0;
  j["xi_hat"] = hl.xi_hat;
  j["tail_mass"] = hl.tail_mass;
  j["in_range"] = hl.a0 > 0.0 && hl.a0 < std::sqrt(2.0);
  j["conventions"] = {
      {"a0", "half-line model constant in (0, sqrt 2), unit field scale"},
      {"xi_hat", "inner minimizer of the half-line form at lambda = a0"},
      {"log_scale", false}};
  return j;
}

json run_potential(const ExperimentConfig& cfg, RunManifest& man) {
  Stopwatch sw;
  PotentialField field(cfg.make_map(), cfg.ns, cfg.nt);
  MinimumReport min = locate_minimum(field);
  json j = potential_report(field, min);
  if (!min.unique_min)
    man.warnings.push_back("potential: minimum is not unique");
  if (!min.strictly_below_straight)
    man.warnings.push_back(
        "potential: minimum not strictly below the straight-strip floor");
  man.wall_ms["potential"] = sw.ms();
  return j;
}

json run_conformal(const ExperimentConfig& cfg, RunManifest& man) {
  Stopwatch sw;
  PotentialField field(cfg.make_map(), cfg.ns, cfg.nt);
  MinimumReport min = locate_minimum(field);
  Biholomorphism bih(cfg.make_map(), cfg.ns, cfg.nt);
  json j = conformal_report(bih, min, &man.warnings, cfg.tolerances.cr_warn);
  man.wall_ms["conformal"] = sw.ms();
  return j;
}

json run_effective(const ExperimentConfig& cfg, RunManifest& man) {
  Stopwatch sw;
  PotentialField field(cfg.make_map(), cfg.ns, cfg.nt);
  Biholomorphism bih(cfg.make_map(), cfg.ns, cfg.nt);
  EffectiveReport rep =
      lambda_eff(field, bih, cfg.h, cfg.hardy.k_max, cfg.hardy.M,
                 cfg.effective.synthetic, cfg.hardy.nq_boundary,
                 cfg.hardy.nq_circle);
  std::vector<GapEntry> gaps;
  for (size_t i = 0; i < cfg.h.size(); ++i) {
    fiber::Threshold tp =
        fiber::threshold_pos(cfg.h[i], cfg.delta, cfg.fiber.n, cfg.fiber.nq);
    gaps.push_back(gap_report(rep, static_cast<int>(i), tp.lambda_ess));
  }
  json j = effective_report_json(rep, gaps, &man.warnings,
                                 cfg.tolerances.trunc_warn);

  const fs::path csv_path = fs::path(cfg.out_dir) / "effective.csv";
  write_text_file(csv_path.string(), effective_csv(rep, gaps));
  note(csv_path);

  Vec hx(static_cast<int>(rep.entries.size()));
  for (size_t i = 0; i < rep.entries.size(); ++i)
    hx[static_cast<int>(i)] = rep.entries[i].h;
  std::vector<SvgSeries> series;
  for (int k = 0; k < rep.k_max; ++k) {
    Vec rk(hx.size());
    for (int i = 0; i < hx.size(); ++i) rk[i] = rep.entries[i].ratio[k];
    series.push_back({"r_" + std::to_string(k + 1), hx, rk});
  }
  SvgBand asym{1.0, 1.0, "asymptote r = 1"};
  const fs::path svg_path = fs::path(cfg.out_dir) / "effective_ratios.svg";
  write_line_chart(svg_path.string(), "effective / model eigenvalue ratios",
                   "h", "r_k", series, asym);
  note(svg_path);

  j["files"] = {{"csv", "effective.csv"}, {"svg", "effective_ratios.svg"}};
  man.wall_ms["effective"] = sw.ms();
  return j;
}

json run_report(const ExperimentConfig& cfg, RunManifest& man) {
  json bundle;
  {
    Stopwatch sw;
    PotentialField field(cfg.make_map(), cfg.ns, cfg.nt);
    MinimumReport min = locate_minimum(field);
    bundle["potential"] = potential_report(field, min);
    if (!min.unique_min)
      man.warnings.push_back("potential: minimum is not unique");
    man.wall_ms["potential"] = sw.ms();

    Stopwatch swc;
    Biholomorphism bih(cfg.make_map(), cfg.ns, cfg.nt);
    bundle["conformal"] =
        conformal_report(bih, min, &man.warnings, cfg.tolerances.cr_warn);
    man.wall_ms["conformal"] = swc.ms();

    Stopwatch swt;
    bundle["thresholds"] = thresholds_report(cfg);
    man.wall_ms["thresholds"] = swt.ms();

    Stopwatch swe;
    EffectiveReport rep =
        lambda_eff(field, bih, cfg.h, cfg.hardy.k_max, cfg.hardy.M,
                   cfg.effective.synthetic, cfg.hardy.nq_boundary,
                   cfg.hardy.nq_circle);
    std::vector<GapEntry> gaps;
    for (size_t i = 0; i < cfg.h.size(); ++i) {
      fiber::Threshold tp = fiber::threshold_pos(cfg.h[i], cfg.delta,
                                                 cfg.fiber.n, cfg.fiber.nq);
      gaps.push_back(gap_report(rep, static_cast<int>(i), tp.lambda_ess));
    }
    bundle["effective"] = effective_report_json(rep, gaps, &man.warnings,
                                                cfg.tolerances.trunc_warn);
    man.wall_ms["effective"] = swe.ms();
  }
  return bundle;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "strip-dirac: spectral analysis of the magnetic Dirac operator on a "
      "curved strip.\n"
      "Outputs: JSON reports (schema includes a conventions block per "
      "section), CSV curves\n"
      "(dispersion: xi,pos_1..pos_K,neg_1..neg_K with neg_k = |mu_k^-|; "
      "effective:\n"
      "h,lambda_log_k,ratio_k,rr_monotone,trunc_dev,threshold_log,margin_log,"
      "in_gap)\n"
      "and W3C-valid SVG plots.  Exit codes: 0 ok, 2 solver failure, 3 "
      "config error,\n"
      "4 model assumption violated.  Worker count: STRIPDIRAC_WORKERS "
      "(results are\n"
      "independent of it)."};
  app.require_subcommand(1);

  std::string cfg_path, out_override;
  double h_override = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", cfg_path, "JSON experiment config path")
        ->required();
    sub->add_option("--out", out_override,
                    "output directory (overrides config out_dir)");
    return sub;
  };

  CLI::App* c_disp = add_common(app.add_subcommand(
      "dispersion",
      "xi-sweep of the fiber eigenvalue branches; CSV columns: xi, "
      "pos_1..pos_K, neg_1..neg_K (neg stored positive); SVG with the "
      "spectral gap band"));
  // Free the short -h so the single-rung override can be spelled --h.
  c_disp->set_help_flag("--help", "print this help message and exit");
  c_disp->add_option("--h", h_override,
                     "run a single h instead of the config ladder")
      ->check(CLI::PositiveNumber);
  CLI::App* c_thr = add_common(app.add_subcommand(
      "thresholds",
      "essential-spectrum edges per h, Gaussian-bound and a0 ratios"));
  CLI::App* c_a0 = add_common(app.add_subcommand(
      "a0", "half-line model constant a0 with decay diagnostics"));
  CLI::App* c_pot = add_common(app.add_subcommand(
      "potential", "magnetic potential minimum report and assumption flags"));
  CLI::App* c_conf = add_common(app.add_subcommand(
      "conformal", "strip straightening residuals and disk derivative"));
  CLI::App* c_eff = add_common(app.add_subcommand(
      "effective",
      "weighted-pencil effective eigenvalues over the h ladder; CSV "
      "columns: h, lambda_log_1..k (natural logs), ratio_1..k, rr_monotone, "
      "trunc_dev, threshold_log, margin_log, in_gap"));
  CLI::App* c_rep = add_common(app.add_subcommand(
      "report",
      "single JSON bundling potential, conformal, thresholds, effective"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    ExperimentConfig cfg = load_config(cfg_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    fs::create_directories(cfg.out_dir);

    RunManifest man;
    man.config_hash = config_hash(cfg);
    man.versions = module_versions();

    std::string name;
    json payload;
    if (c_disp->parsed()) {
      name = "dispersion";
      payload = run_dispersion(cfg, man, h_override);
    } else if (c_thr->parsed()) {
      name = "thresholds";
      payload = run_thresholds(cfg, man);
    } else if (c_a0->parsed()) {
      name = "a0";
      payload = run_a0(cfg, man);
    } else if (c_pot->parsed()) {
      name = "potential";
      payload = run_potential(cfg, man);
    } else if (c_conf->parsed()) {
      name = "conformal";
      payload = run_conformal(cfg, man);
    } else if (c_eff->parsed()) {
      name = "effective";
      payload = run_effective(cfg, man);
    } else if (c_rep->parsed()) {
      name = "report";
      payload = run_report(cfg, man);
    }

    payload["manifest"] = manifest_to_json(man);
    const fs::path json_path = fs::path(cfg.out_dir) / (name + ".json");
    write_json_file(json_path, payload);
    note(json_path);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const AssumptionError& e) {
    std::cerr << "assumption violated: " << e.what() << "\n";
    return 4;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
