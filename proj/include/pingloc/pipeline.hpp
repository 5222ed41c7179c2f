#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pingloc/guess.hpp"
#include "pingloc/recording.hpp"
#include "pingloc/scenario.hpp"
#include "pingloc/solver.hpp"
#include "pingloc/tdoa.hpp"

namespace pingloc {

struct LocalizeParams {
  int filter_order = 4;
  double band_low = 30e3;
  double band_high = 50e3;
  WindowParams window;
  SolverParams solver;
  GuessParams guess;
  /// Dead time after an accepted onset before searching for the next ping.
  double holdoff = 0.1;
};

struct StageTiming {
  double filter_ms = 0.0;
  double window_ms = 0.0;
  double guess_ms = 0.0;
  double solve_ms = 0.0;
};

struct AzimuthReport {
  int ping_index = 0;
  double azimuth = 0.0;
  double elevation = 0.0;
  double range = 0.0;
  std::string octant_guess;
  double objective = 0.0;
  bool converged = false;
  Eigen::Index window_start = 0;
  Eigen::Index window_length = 0;
  StageTiming timing;

  // Not part of the report stream.
  Vec3 position = Vec3::Zero();
  double onset_time = 0.0;
  int iterations = 0;
  bool low_confidence = false;
};

struct LocalizationRun {
  std::vector<AzimuthReport> reports;
  /// One object per processed ping: chosen window, per-pair delays, variances.
  std::vector<nlohmann::json> debug;
  /// Pings that were detected but could not be localised.
  std::vector<std::string> diagnostics;
};

using ReportSink = std::function<void(const AzimuthReport&)>;

/// Every ping in time order; reports are passed to `sink` as they are produced.
/// Throws kNoPing when no ping is found at all.
LocalizationRun localize_recording(const MultiChannelRecording& recording, const HydrophoneArray& array,
                                   double sound_speed, const LocalizeParams& params = {}, const ReportSink& sink = {});

/// Scenario defaults for the localiser (sound speed, sample-period margins),
/// then render and localise.
LocalizeParams params_for(const Scenario& scenario, LocalizeParams params = {});
LocalizationRun run_localization(const Scenario& scenario, const LocalizeParams& params = {},
                                 const ReportSink& sink = {});

nlohmann::json to_json(const AzimuthReport& report, bool with_timing = false);

/// Optional "localize" block of a scenario file: filter_order, band_low,
/// band_high, holdoff, window{...}, solver{...}, guess{radius}.
LocalizeParams localize_params_from_json(const nlohmann::json& doc, LocalizeParams params = {});

}  // namespace pingloc
