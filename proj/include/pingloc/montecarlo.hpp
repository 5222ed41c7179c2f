#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pingloc/pipeline.hpp"
#include "pingloc/scenario.hpp"

namespace pingloc {

/// Noise setting of one evaluation cell. JSON: a number (SNR in dB), null
/// (noiseless) or "base" (the base scenario's noise model unchanged).
struct SnrSetting {
  enum class Kind { kNoiseless, kSnr, kBase };
  Kind kind = Kind::kNoiseless;
  double db = 0.0;

  static SnrSetting noiseless() { return {}; }
  static SnrSetting snr(double db) { return {Kind::kSnr, db}; }
  static SnrSetting base() { return {Kind::kBase, 0.0}; }
  /// CSV form: "inf", "base" or the dB value.
  std::string label() const;
  nlohmann::json to_json() const;
};

struct EvalConfig {
  std::vector<double> ranges_m{10.0};
  std::vector<SnrSetting> snr_db{SnrSetting::noiseless()};
  int trials_per_cell = 10;
  std::uint64_t seed = 1;
  double success_threshold_deg = 5.0;
  double elevation_max_deg = 30.0;
  /// Placements keep every coordinate (relative to the coarse centroid)
  /// at least this far from zero so the true octant is unambiguous.
  double interior_margin_m = 1.0;
  Scenario base;
  LocalizeParams params;
  /// 0 = hardware concurrency.
  int threads = 0;
};

EvalConfig eval_config_from_json(const nlohmann::json& doc);

struct TrialRecord {
  int trial = 0;
  double range_m = 0.0;
  SnrSetting snr;
  double true_az_deg = 0.0;
  std::optional<double> est_az_deg;
  double az_err_deg = 180.0;
  std::string octant_true;
  std::string octant_guess;
  bool converged = false;
  bool detected = false;
  double objective = 0.0;
  int iters = 0;
  Vec3 pinger = Vec3::Zero();
};

struct BreakdownRow {
  double range_m = 0.0;
  SnrSetting snr;
  int trials = 0;
  int success_count = 0;
  double p50 = 0.0;
  double p90 = 0.0;
  double max = 0.0;
  double octant_accuracy = 0.0;
  double detection_rate = 0.0;
};

struct MonteCarloSummary {
  int trials = 0;
  int success_count = 0;
  double p50 = 0.0;
  double p90 = 0.0;
  double max = 0.0;
  double octant_accuracy = 0.0;
  std::vector<BreakdownRow> rows;

  double success_fraction() const { return trials > 0 ? static_cast<double>(success_count) / trials : 0.0; }
};

struct MonteCarloResult {
  std::vector<TrialRecord> trials;
  MonteCarloSummary summary;
};

/// White-noise sigma whose 30-50 kHz share gives the requested SNR against the
/// steady burst RMS at the nearest hydrophone after the front-end.
double white_sigma_for_snr(const Scenario& scenario, double snr_db);

/// Linear-interpolation percentile, q in [0, 1].
double percentile(std::vector<double> values, double q);

MonteCarloResult monte_carlo(const EvalConfig& config);

void write_csv(std::ostream& out, const MonteCarloResult& result);
nlohmann::json to_json(const MonteCarloSummary& summary);

}  // namespace pingloc
