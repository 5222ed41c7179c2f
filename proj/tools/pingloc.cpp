#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pingloc/montecarlo.hpp"
#include "pingloc/pipeline.hpp"
#include "pingloc/scenario_json.hpp"
#include "pingloc/simulator.hpp"

namespace {

using namespace pingloc;

enum Exit : int { kOk = 0, kConfigError = 1, kNoPingExit = 2, kUnconverged = 3 };

struct Options {
  std::string config;
  std::string recording;
  std::string out;
  std::string csv;
  std::string json;
  std::optional<std::uint64_t> seed;
  bool timing = false;
  bool debug = false;
};

nlohmann::json load_config(const std::string& path) {
  return path.empty() ? nlohmann::json::object() : load_json_file(path);
}

Scenario load_scenario(const std::string& path, bool pinger_optional) {
  nlohmann::json doc = load_config(path);
  if (pinger_optional && doc.is_object()) {
    if (!doc.contains("pinger")) doc["pinger"] = nlohmann::json::object();
    if (!doc["pinger"].contains("position")) doc["pinger"]["position"] = {1.0, 0.0, 0.0};
  }
  return scenario_from_json(doc);
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIo, "cannot open " + path + " for writing");
  return file;
}

int cmd_simulate(const Options& o) {
  if (o.out.empty()) throw Error(ErrorCode::kInvalidArgument, "simulate: --out is required");
  Scenario s = load_scenario(o.config, false);
  if (o.seed) s.seed = *o.seed;
  write_recording(render_scene(s), o.out);
  return kOk;
}

int cmd_localize(const Options& o) {
  const bool from_recording = !o.recording.empty();
  Scenario s = load_scenario(o.config, from_recording);
  if (o.seed) s.seed = *o.seed;
  const nlohmann::json doc = load_config(o.config);
  LocalizeParams params = params_for(s);
  if (doc.is_object() && doc.contains("localize")) params = localize_params_from_json(doc.at("localize"), params);

  std::ofstream file;
  std::ostream& out = open_output(o.out, file);
  bool all_converged = true;
  auto sink = [&](const AzimuthReport& r) {
    out << to_json(r, o.timing).dump() << '\n' << std::flush;
    all_converged = all_converged && r.converged;
  };

  LocalizationRun run;
  if (from_recording) {
    validate_scenario(s);
    run = localize_recording(read_recording(o.recording), s.array, s.sound_speed, params, sink);
  } else {
    run = run_localization(s, params, sink);
  }
  for (const std::string& d : run.diagnostics) std::cerr << "pingloc: " << d << '\n';
  if (o.debug) {
    for (const auto& d : run.debug) std::cerr << d.dump() << '\n';
  }
  if (run.reports.empty()) return kUnconverged;
  return all_converged ? kOk : kUnconverged;
}

int cmd_montecarlo(const Options& o) {
  if (o.config.empty()) throw Error(ErrorCode::kInvalidArgument, "montecarlo: --config is required");
  EvalConfig cfg = eval_config_from_json(load_json_file(o.config));
  if (o.seed) cfg.seed = *o.seed;
  const MonteCarloResult result = monte_carlo(cfg);

  std::ofstream csv_file;
  std::ostream& csv = open_output(o.csv, csv_file);
  write_csv(csv, result);
  const std::string summary = to_json(result.summary).dump(2);
  if (o.json.empty()) {
    std::cerr << summary << '\n';
  } else {
    std::ofstream js(o.json, std::ios::binary);
    if (!js) throw Error(ErrorCode::kIo, "cannot open " + o.json + " for writing");
    js << summary << '\n';
  }
  return kOk;
}

int cmd_validate(const Options& o) {
  const Scenario s = load_scenario(o.config, true);
  const ValidationReport report = validate_array(s.array, s.pinger.frequency, s.sound_speed);
  nlohmann::json out = {{"ok", report.ok}, {"violations", report.violations}};
  std::cout << out.dump() << '\n';
  return report.ok ? kOk : kConfigError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hydrophone array pinger localisation"};
  app.require_subcommand(1);
  Options o;

  auto* simulate = app.add_subcommand("simulate", "Render a scenario to a recording file");
  simulate->add_option("--config", o.config, "Scenario JSON")->required();
  simulate->add_option("--out", o.out, "Recording output path")->required();
  simulate->add_option("--seed", o.seed, "Noise seed override");

  auto* localize = app.add_subcommand("localize", "Emit one NDJSON azimuth report per ping");
  localize->add_option("--config", o.config, "Scenario JSON (array and sound speed when --recording is given)");
  localize->add_option("--recording", o.recording, "Recording file instead of simulating");
  localize->add_option("--out", o.out, "Report output path (default stdout)");
  localize->add_option("--seed", o.seed, "Noise seed override");
  localize->add_flag("--timing", o.timing, "Include per-stage timing in reports");
  localize->add_flag("--debug", o.debug, "Per-ping window diagnostics on stderr");

  auto* montecarlo = app.add_subcommand("montecarlo", "Randomised accuracy evaluation");
  montecarlo->add_option("--config", o.config, "Evaluation config JSON")->required();
  montecarlo->add_option("--csv", o.csv, "Per-trial CSV path (default stdout)");
  montecarlo->add_option("--json", o.json, "Summary JSON path (default stderr)");
  montecarlo->add_option("--seed", o.seed, "Seed override");

  auto* validate = app.add_subcommand("validate", "Check the array geometry");
  validate->add_option("--config", o.config, "Scenario JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*simulate) return cmd_simulate(o);
    if (*localize) return cmd_localize(o);
    if (*montecarlo) return cmd_montecarlo(o);
    if (*validate) return cmd_validate(o);
  } catch (const Error& e) {
    std::cerr << "pingloc: " << e.what() << '\n';
    return e.code() == ErrorCode::kNoPing ? kNoPingExit : kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "pingloc: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}
