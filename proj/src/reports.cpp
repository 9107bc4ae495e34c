#include "stripdirac/reports.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sd {

namespace {

using nlohmann::json;

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("report: cannot write \"" + path + "\"");
  out << content;
}

json potential_report(const PotentialField& field, const MinimumReport& min) {
  json j;
  j["delta"] = field.delta();
  j["L"] = field.L();
  j["grid"] = {{"ns", field.ns()}, {"nt", field.nt()}};
  j["phi_min"] = min.phi_min;
  j["s_min"] = min.s_min;
  j["t_min"] = min.t_min;
  j["hessian"] = {{"a", min.a}, {"b", min.b}};
  j["d0"] = min.d0;
  j["straight_floor"] = -0.5 * field.delta() * field.delta();
  j["flags"] = {{"interior", min.interior},
                {"nondegenerate", min.nondegenerate},
                {"unique_min", min.unique_min},
                {"strictly_below_straight", min.strictly_below_straight}};
  j["conventions"] = {
      {"phi_min", "absolute value of the potential at its minimum, linear "
                  "scale"},
      {"hessian", "a, b are twice the physical Hessian eigenvalues, a <= b; "
                  "a + b = 2 for the unit field"},
      {"d0", "depth below the straight-strip floor -delta^2/2, linear "
             "scale"},
      {"log_scale", false}};
  return j;
}

json conformal_report(const Biholomorphism& bih, const MinimumReport& min,
                      std::vector<std::string>* warnings, double cr_warn) {
  json j;
  j["grid"] = {{"ns", bih.ns()}, {"nt", bih.nt()}};
  j["cr_residual"] = bih.cr_residual();
  j["loop_residual"] = bih.loop_residual();
  j["beta_deviation"] = bih.beta_deviation();
  j["c1_deviation"] = bih.c1_deviation();
  j["sup_fprime"] = bih.sup_fprime();
  j["sup_finv_prime"] = bih.sup_finv_prime();

  DiskMapData d = disk_derivative(bih, min.s_min, min.t_min);
  j["disk"] = {{"g0_abs", d.g0_abs},
               {"w0_abs", std::abs(d.w0)},
               {"mobius_factor", d.mobius_factor},
               {"sigma_factor", d.sigma_factor},
               {"dist_min", d.dist_min},
               {"koebe_ok", d.koebe_ok}};
  j["conventions"] = {
      {"cr_residual", "max Cauchy-Riemann defect |alpha_s - m beta_t| at "
                      "fixed interior stations, linear scale"},
      {"g0_abs", "|g'(0)| of the disk uniformization centered at the "
                 "potential minimum"},
      {"log_scale", false}};
  if (warnings && bih.cr_residual() > cr_warn)
    warnings->push_back("conformal: consistency residual " +
                        format_double(bih.cr_residual()) +
                        " above the warning gate");
  return j;
}

json thresholds_report(const ExperimentConfig& cfg) {
  json j;
  fiber::HalflineResult hl = fiber::halfline_a0(cfg.halfline.T,
                                                cfg.halfline.n);
  j["a0"] = {{"value", hl.a0},
             {"xi_hat", hl.xi_hat},
             {"tail_mass", hl.tail_mass},
             {"in_range", hl.a0 > 0.0 && hl.a0 < std::sqrt(2.0)}};

  json rows = json::array();
  std::vector<double> rpos, rneg;
  for (double h : cfg.h) {
    fiber::Threshold tp =
        fiber::threshold_pos(h, cfg.delta, cfg.fiber.n, cfg.fiber.nq);
    fiber::Threshold tn =
        fiber::threshold_neg(h, cfg.delta, cfg.fiber.n, cfg.fiber.nq);
    const double nu0 = fiber::nu1(0.0, h, cfg.delta);
    json row;
    row["h"] = h;
    row["lambda_ess_pos"] = tp.lambda_ess;
    row["xi_star_pos"] = tp.xi_star;
    row["lambda_ess_neg"] = tn.lambda_ess;
    row["xi_star_neg"] = tn.xi_star;
    row["nu1_zero"] = nu0;
    row["ratio_pos"] = tp.lambda_ess / nu0;
    row["ratio_neg_scaled"] = tn.lambda_ess / std::sqrt(h);
    rows.push_back(row);
    rpos.push_back(tp.lambda_ess / nu0);
    rneg.push_back(tn.lambda_ess / std::sqrt(h));
  }
  j["rows"] = rows;
  j["ratios"] = {{"pos", rpos}, {"neg_scaled", rneg}};
  j["lambda_ess_pos"] = rows.back()["lambda_ess_pos"];
  j["lambda_ess_neg"] = rows.back()["lambda_ess_neg"];
  j["conventions"] = {
      {"lambda_ess_pos", "absolute threshold of the positive branch, linear "
                         "scale (exponentially small in 1/h)"},
      {"lambda_ess_neg", "absolute value of the negative-branch threshold"},
      {"ratio_pos", "lambda_ess_pos / nu1(0, h): Gaussian-bound ratio, "
                    "dimensionless, -> 1 as h -> 0"},
      {"ratio_neg_scaled", "lambda_ess_neg / sqrt(h): compare against a0"},
      {"lambda_ess_pos_meaning", "top-level values refer to the smallest h "
                                 "of the ladder"},
      {"log_scale", false}};
  return j;
}

json effective_report_json(const EffectiveReport& rep,
                           const std::vector<GapEntry>& gaps,
                           std::vector<std::string>* warnings,
                           double trunc_warn) {
  json j;
  j["minimum"] = {
      {"s_min", rep.minimum.s_min},
      {"t_min", rep.minimum.t_min},
      {"phi_min", rep.minimum.phi_min},
      {"a", rep.minimum.a},
      {"b", rep.minimum.b},
      {"d0", rep.minimum.d0}};
  j["assumption_ok"] = rep.assumption_ok;
  j["g0_abs"] = rep.g0_abs;
  j["gram_dev"] = rep.gram_dev;
  j["gram_cond"] = rep.gram_cond;
  j["M"] = rep.M;
  j["k_max"] = rep.k_max;
  j["dh"] = rep.dh;
  j["dh_min"] = rep.dh_min;
  j["db"] = rep.db;
  json entries = json::array();
  for (const EffectiveEntry& e : rep.entries) {
    json ej;
    ej["h"] = e.h;
    ej["lambda_scaled"] = vec_to_json(e.lambda_scaled);
    ej["lambda_log"] = vec_to_json(e.lambda_log);
    ej["ratio"] = vec_to_json(e.ratio);
    ej["rr_monotone"] = e.rr_monotone;
    ej["trunc_dev"] = e.trunc_dev;
    ej["g00"] = e.g00;
    entries.push_back(ej);
    if (warnings && e.trunc_dev > trunc_warn)
      warnings->push_back("effective: truncation sensitivity " +
                          format_double(e.trunc_dev) + " at h = " +
                          format_double(e.h));
  }
  j["entries"] = entries;
  json gj = json::array();
  for (const GapEntry& g : gaps) {
    gj.push_back({{"h", g.h},
                  {"threshold_log", g.threshold_log},
                  {"margin_log", g.margin_log},
                  {"in_gap", g.in_gap}});
    if (warnings && g.in_gap < 1)
      warnings->push_back("effective: no level inside the gap at h = " +
                          format_double(g.h));
  }
  j["gaps"] = gj;
  j["conventions"] = {
      {"lambda_scaled", "lambda_k^eff * exp(-2 phi_min / h): pencil "
                        "eigenvalue with the exponential peeled off, linear "
                        "scale"},
      {"lambda_log", "natural logarithm of lambda_k^eff (log scale: the "
                     "absolute value underflows double precision)"},
      {"ratio", "lambda_k^eff / [h^{1-k} e^{2 phi_min/h} (d_H^k/d_B^k)^2], "
                "dimensionless, -> 1 as h -> 0"},
      {"dh", "Hardy distances d_H^k, closed form; dh_min: same by "
             "constrained minimization"},
      {"db", "Bargmann distances d_B^k, closed form"},
      {"threshold_log", "natural logarithm of lambda_ess^+(h) (log scale)"},
      {"margin_log", "threshold_log - log lambda_1^eff: positive means the "
                     "ground level lies inside the gap"},
      {"log_scale", "fields suffixed _log are natural logarithms"}};
  return j;
}

std::string dispersion_csv(const fiber::DispersionCurve& dc) {
  std::ostringstream out;
  const int K = static_cast<int>(dc.pos.cols());
  out << "xi";
  for (int k = 1; k <= K; ++k) out << ",pos_" << k;
  for (int k = 1; k <= K; ++k) out << ",neg_" << k;
  out << "\n";
  for (int i = 0; i < dc.xi.size(); ++i) {
    out << format_double(dc.xi[i]);
    for (int k = 0; k < K; ++k) out << "," << format_double(dc.pos(i, k));
    for (int k = 0; k < K; ++k) out << "," << format_double(dc.neg(i, k));
    out << "\n";
  }
  return out.str();
}

std::string effective_csv(const EffectiveReport& rep,
                          const std::vector<GapEntry>& gaps) {
  std::ostringstream out;
  out << "h";
  for (int k = 1; k <= rep.k_max; ++k) out << ",lambda_log_" << k;
  for (int k = 1; k <= rep.k_max; ++k) out << ",ratio_" << k;
  out << ",rr_monotone,trunc_dev,threshold_log,margin_log,in_gap\n";
  for (size_t i = 0; i < rep.entries.size(); ++i) {
    const EffectiveEntry& e = rep.entries[i];
    out << format_double(e.h);
    for (int k = 0; k < rep.k_max; ++k)
      out << "," << format_double(e.lambda_log[k]);
    for (int k = 0; k < rep.k_max; ++k)
      out << "," << format_double(e.ratio[k]);
    out << "," << (e.rr_monotone ? 1 : 0) << ","
        << format_double(e.trunc_dev);
    if (i < gaps.size())
      out << "," << format_double(gaps[i].threshold_log) << ","
          << format_double(gaps[i].margin_log) << "," << gaps[i].in_gap;
    else
      out << ",,,";
    out << "\n";
  }
  return out.str();
}

}  // namespace sd
