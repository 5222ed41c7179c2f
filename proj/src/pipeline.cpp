#include "pingloc/pipeline.hpp"

#include <chrono>

#include "pingloc/simulator.hpp"

namespace pingloc {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

nlohmann::json debug_json(int ping, const TdoaSet& tdoa) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const DelayEstimate& d : tdoa.pairwise) {
    pairs.push_back({{"channels", {d.channel_i, d.channel_j}},
                     {"delta_t", d.delta_t},
                     {"lag_samples", d.lag_samples},
                     {"peak_correlation", d.peak_correlation}});
  }
  return {{"ping_index", ping},
          {"reference_channel", tdoa.reference_channel},
          {"onset_time", tdoa.onset_time_abs},
          {"window", {{"start", tdoa.window_start}, {"length", tdoa.window_length}}},
          {"window_variance", tdoa.window_variance},
          {"candidate_variances", tdoa.candidate_variances},
          {"pairwise", pairs},
          {"coarse_arrivals", tdoa.coarse_arrivals}};
}

template <typename T>
void read_field(const nlohmann::json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kConfig, where + "." + key + ": wrong type");
  }
}

}  // namespace

LocalizationRun localize_recording(const MultiChannelRecording& recording, const HydrophoneArray& array,
                                   double sound_speed, const LocalizeParams& params, const ReportSink& sink) {
  if (recording.channel_count() != 8) throw Error(ErrorCode::kConfig, "recording must have 8 channels");
  const double fs = recording.sample_rate;
  WindowParams window = params.window;
  window.sound_speed = sound_speed;
  GuessParams guess_params = params.guess;
  guess_params.sound_speed = sound_speed;

  LocalizationRun run;
  auto t_filter = Clock::now();
  const BiquadCascade cascade = design_bandpass(params.filter_order, params.band_low, params.band_high, fs);
  const FilteredRecording filtered(recording, cascade, window.rms_window);
  const double filter_ms = elapsed_ms(t_filter);

  const auto holdoff = static_cast<Eigen::Index>(std::llround(params.holdoff * fs));
  Eigen::Index search_from = 0;
  int ping_index = 0;
  bool any_ping = false;
  while (search_from < filtered.length()) {
    AzimuthReport report;
    report.timing.filter_ms = ping_index == 0 ? filter_ms : 0.0;
    TdoaSet tdoa;
    auto t_window = Clock::now();
    try {
      tdoa = select_stable_window(filtered, array, window, search_from);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kNoPing && !any_ping) throw;
      if (e.code() == ErrorCode::kNoPing) break;
      // Detected but unusable (e.g. truncated by the end of the recording): skip past it.
      any_ping = true;
      run.diagnostics.push_back("ping " + std::to_string(ping_index) + ": " + e.what());
      const auto onset = filtered.detector(array.precise_channel(0)).first_crossing(window.k_threshold, search_from);
      if (!onset) break;
      search_from = *onset + std::max<Eigen::Index>(holdoff, 1);
      ++ping_index;
      continue;
    }
    any_ping = true;
    report.timing.window_ms = elapsed_ms(t_window);
    run.debug.push_back(debug_json(ping_index, tdoa));
    const auto onset = static_cast<Eigen::Index>(std::llround(tdoa.onset_time_abs * fs));
    search_from = onset + std::max<Eigen::Index>(holdoff, 1);

    try {
      auto t_guess = Clock::now();
      const OctantGuess guess = octant_guess(tdoa.coarse_arrivals, array.coarse, guess_params);
      report.timing.guess_ms = elapsed_ms(t_guess);

      auto t_solve = Clock::now();
      const SolverResult result = gradient_descent(guess.init, tdoa, array, sound_speed, params.solver);
      report.timing.solve_ms = elapsed_ms(t_solve);

      report.ping_index = ping_index;
      report.azimuth = result.azimuth;
      report.elevation = result.elevation;
      report.range = result.range;
      report.octant_guess = guess.octant.to_string();
      report.objective = result.objective;
      report.converged = result.converged;
      report.window_start = tdoa.window_start;
      report.window_length = tdoa.window_length;
      report.position = result.theta.position;
      report.onset_time = tdoa.onset_time_abs;
      report.iterations = result.iterations;
      report.low_confidence = guess.low_confidence;
      run.reports.push_back(report);
      if (sink) sink(report);
    } catch (const Error& e) {
      run.diagnostics.push_back("ping " + std::to_string(ping_index) + ": " + e.what());
    }
    ++ping_index;
  }
  return run;
}

LocalizeParams params_for(const Scenario& scenario, LocalizeParams params) {
  params.window.sound_speed = scenario.sound_speed;
  params.guess.sound_speed = scenario.sound_speed;
  params.guess.low_confidence_margin = 2.0 / scenario.sample_rate;
  return params;
}

LocalizationRun run_localization(const Scenario& scenario, const LocalizeParams& params, const ReportSink& sink) {
  const MultiChannelRecording recording = render_scene(scenario);
  return localize_recording(recording, scenario.array, scenario.sound_speed, params_for(scenario, params), sink);
}

nlohmann::json to_json(const AzimuthReport& r, bool with_timing) {
  nlohmann::json out = {
      {"ping_index", r.ping_index},
      {"azimuth", r.azimuth},
      {"elevation", r.elevation},
      {"range", r.range},
      {"octant_guess", r.octant_guess},
      {"objective", r.objective},
      {"converged", r.converged},
      {"window", {{"start", r.window_start}, {"length", r.window_length}}},
  };
  if (with_timing) {
    out["timing"] = {{"filter_ms", r.timing.filter_ms},
                     {"window_ms", r.timing.window_ms},
                     {"guess_ms", r.timing.guess_ms},
                     {"solve_ms", r.timing.solve_ms}};
  }
  return out;
}

LocalizeParams localize_params_from_json(const nlohmann::json& doc, LocalizeParams params) {
  if (!doc.is_object()) throw Error(ErrorCode::kConfig, "localize: expected a JSON object");
  read_field(doc, "filter_order", params.filter_order, "localize");
  read_field(doc, "band_low", params.band_low, "localize");
  read_field(doc, "band_high", params.band_high, "localize");
  read_field(doc, "holdoff", params.holdoff, "localize");
  if (doc.contains("window")) {
    const nlohmann::json& w = doc.at("window");
    read_field(w, "window", params.window.window, "localize.window");
    read_field(w, "hop", params.window.hop, "localize.window");
    read_field(w, "candidates", params.window.candidates, "localize.window");
    read_field(w, "sub_windows", params.window.sub_windows, "localize.window");
    read_field(w, "k_threshold", params.window.k_threshold, "localize.window");
    read_field(w, "rms_window", params.window.rms_window, "localize.window");
    read_field(w, "max_variance_samples", params.window.max_variance_samples, "localize.window");
  }
  if (doc.contains("solver")) {
    const nlohmann::json& so = doc.at("solver");
    read_field(so, "step_size", params.solver.step_size, "localize.solver");
    read_field(so, "max_iters", params.solver.max_iters, "localize.solver");
    read_field(so, "grad_tol", params.solver.grad_tol, "localize.solver");
    read_field(so, "f_tol", params.solver.f_tol, "localize.solver");
    read_field(so, "backtrack", params.solver.backtrack, "localize.solver");
    read_field(so, "armijo", params.solver.armijo, "localize.solver");
  }
  if (doc.contains("guess")) read_field(doc.at("guess"), "radius", params.guess.radius, "localize.guess");
  return params;
}

}  // namespace pingloc
