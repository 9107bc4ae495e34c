#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "stripdirac/config.hpp"
#include "stripdirac/conformal.hpp"
#include "stripdirac/effective.hpp"
#include "stripdirac/fiber.hpp"
#include "stripdirac/potential.hpp"

namespace sd {

/// Potential section: minimum location/shape and Assumption flags.
nlohmann::json potential_report(const PotentialField& field,
                                const MinimumReport& min);

/// Conformal section: map residuals plus the disk derivative at the
/// potential minimum.
nlohmann::json conformal_report(const Biholomorphism& bih,
                                const MinimumReport& min,
                                std::vector<std::string>* warnings = nullptr,
                                double cr_warn = 1e-2);

/// Threshold section: per-h essential-spectrum edges, the Gaussian upper
/// bound at xi = 0, the half-line constant a0, and the comparison ratios.
nlohmann::json thresholds_report(const ExperimentConfig& cfg);

/// Effective section: serialized EffectiveReport plus per-h gap entries.
nlohmann::json effective_report_json(const EffectiveReport& rep,
                                     const std::vector<GapEntry>& gaps,
                                     std::vector<std::string>* warnings =
                                         nullptr,
                                     double trunc_warn = 0.05);

/// CSV of a dispersion sweep: columns xi, pos_1..pos_K, neg_1..neg_K
/// (negative branches stored as |mu_k^-|).
std::string dispersion_csv(const fiber::DispersionCurve& dc);

/// CSV of the effective ladder: one row per h with log-scale eigenvalues,
/// asymptotic ratios and gap placement.
std::string effective_csv(const EffectiveReport& rep,
                          const std::vector<GapEntry>& gaps);

/// Shortest round-trip decimal representation used by every CSV cell.
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace sd
