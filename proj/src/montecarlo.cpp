#include "pingloc/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include "pingloc/filter.hpp"
#include "pingloc/scenario_json.hpp"

namespace pingloc {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Cell {
  double range_m;
  SnrSetting snr;
};

Vec3 place_pinger(const EvalConfig& cfg, double range, std::mt19937_64& rng) {
  const Vec3 centre = cfg.base.array.precise_centroid();
  const Vec3 coarse_centre = cfg.base.array.coarse_centroid();
  std::uniform_real_distribution<double> azimuth(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> elevation(-cfg.elevation_max_deg * kDeg, cfg.elevation_max_deg * kDeg);
  Vec3 p = centre;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double az = azimuth(rng);
    const double el = elevation(rng);
    p = centre + range * Vec3(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
    if (((p - coarse_centre).array().abs() > cfg.interior_margin_m).all()) return p;
  }
  return p;
}

TrialRecord run_trial(const EvalConfig& cfg, const Cell& cell, int cell_index, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(cell_index), static_cast<std::uint32_t>(trial)};
  std::mt19937_64 rng(seq);

  Scenario scenario = cfg.base;
  scenario.pinger.position = place_pinger(cfg, cell.range_m, rng);
  scenario.seed = rng();
  switch (cell.snr.kind) {
    case SnrSetting::Kind::kNoiseless: scenario.noise = NoiseSpec::none(); break;
    case SnrSetting::Kind::kSnr: scenario.noise.white_sigma = white_sigma_for_snr(scenario, cell.snr.db); break;
    case SnrSetting::Kind::kBase: break;
  }

  TrialRecord rec;
  rec.trial = trial;
  rec.range_m = cell.range_m;
  rec.snr = cell.snr;
  rec.pinger = scenario.pinger.position;
  rec.true_az_deg = true_azimuth_elevation(scenario.pinger.position - scenario.array.precise_centroid()).azimuth;
  rec.octant_true = octant_of(scenario.pinger.position - scenario.array.coarse_centroid()).to_string();
  try {
    const LocalizationRun run = run_localization(scenario, cfg.params);
    rec.detected = !run.debug.empty() || !run.reports.empty();
    if (!run.reports.empty()) {
      const AzimuthReport& r = run.reports.front();
      rec.est_az_deg = r.azimuth;
      rec.az_err_deg = std::abs(wrap_degrees(r.azimuth - rec.true_az_deg));
      rec.octant_guess = r.octant_guess;
      rec.converged = r.converged;
      rec.objective = r.objective;
      rec.iters = r.iterations;
    }
  } catch (const Error&) {
    // Undetected or unusable ping: counted as a worst-case bearing.
  }
  return rec;
}

BreakdownRow summarise(const std::vector<const TrialRecord*>& trials, double threshold) {
  BreakdownRow row;
  std::vector<double> errors;
  int octant_hits = 0;
  int detections = 0;
  for (const TrialRecord* t : trials) {
    errors.push_back(t->az_err_deg);
    if (t->converged && t->az_err_deg < threshold) ++row.success_count;
    if (t->octant_guess == t->octant_true) ++octant_hits;
    if (t->detected) ++detections;
  }
  row.trials = static_cast<int>(trials.size());
  if (!errors.empty()) {
    row.p50 = percentile(errors, 0.5);
    row.p90 = percentile(errors, 0.9);
    row.max = *std::max_element(errors.begin(), errors.end());
    row.octant_accuracy = static_cast<double>(octant_hits) / row.trials;
    row.detection_rate = static_cast<double>(detections) / row.trials;
  }
  return row;
}

std::string format_number(double value, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, value);
  return buf;
}

}  // namespace

std::string SnrSetting::label() const {
  switch (kind) {
    case Kind::kNoiseless: return "inf";
    case Kind::kBase: return "base";
    case Kind::kSnr: break;
  }
  return format_number(db, "%.3f");
}

nlohmann::json SnrSetting::to_json() const {
  switch (kind) {
    case Kind::kNoiseless: return nullptr;
    case Kind::kBase: return "base";
    case Kind::kSnr: break;
  }
  return db;
}

EvalConfig eval_config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kConfig, "eval config: expected a JSON object");
  EvalConfig cfg;
  try {
    if (doc.contains("ranges_m")) cfg.ranges_m = doc.at("ranges_m").get<std::vector<double>>();
    if (doc.contains("snr_db")) {
      cfg.snr_db.clear();
      for (const auto& v : doc.at("snr_db")) {
        if (v.is_null()) {
          cfg.snr_db.push_back(SnrSetting::noiseless());
        } else if (v.is_string() && v.get<std::string>() == "base") {
          cfg.snr_db.push_back(SnrSetting::base());
        } else {
          cfg.snr_db.push_back(SnrSetting::snr(v.get<double>()));
        }
      }
    }
    if (doc.contains("trials_per_cell")) cfg.trials_per_cell = doc.at("trials_per_cell").get<int>();
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("success_threshold_deg")) cfg.success_threshold_deg = doc.at("success_threshold_deg").get<double>();
    if (doc.contains("elevation_max_deg")) cfg.elevation_max_deg = doc.at("elevation_max_deg").get<double>();
    if (doc.contains("interior_margin_m")) cfg.interior_margin_m = doc.at("interior_margin_m").get<double>();
    if (doc.contains("threads")) cfg.threads = doc.at("threads").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("eval config: ") + e.what());
  }
  if (doc.contains("scenario")) {
    nlohmann::json base = doc.at("scenario");
    // Placement is drawn per trial; the base only needs a syntactically valid pinger.
    if (!base.contains("pinger")) base["pinger"] = nlohmann::json::object();
    if (!base["pinger"].contains("position")) base["pinger"]["position"] = {10.0, 0.0, 0.0};
    cfg.base = scenario_from_json(base);
  }
  if (doc.contains("localize")) cfg.params = localize_params_from_json(doc.at("localize"));
  if (cfg.trials_per_cell < 1) throw Error(ErrorCode::kConfig, "eval config: trials_per_cell must be >= 1");
  if (cfg.ranges_m.empty() || cfg.snr_db.empty()) throw Error(ErrorCode::kConfig, "eval config: empty ranges_m or snr_db");
  return cfg;
}

double white_sigma_for_snr(const Scenario& s, double snr_db) {
  double nearest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4; ++k) {
    nearest = std::min({nearest, (s.pinger.position - s.array.precise.col(k)).norm(),
                        (s.pinger.position - s.array.coarse.col(k)).norm()});
  }
  const BiquadCascade analog = design_bandpass(s.front_end.analog_order, s.front_end.analog_band_low,
                                               s.front_end.analog_band_high, s.sample_rate);
  const double burst_rms =
      s.pinger.amplitude / nearest * s.front_end.gain * analog.magnitude(s.pinger.frequency) / std::sqrt(2.0);
  const double band_share = std::sqrt(2.0 * (s.front_end.analog_band_high - s.front_end.analog_band_low) / s.sample_rate);
  return burst_rms / (std::pow(10.0, snr_db / 20.0) * band_share);
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

MonteCarloResult monte_carlo(const EvalConfig& cfg) {
  if (cfg.trials_per_cell < 1) throw Error(ErrorCode::kConfig, "trials_per_cell must be >= 1");
  std::vector<Cell> cells;
  for (double r : cfg.ranges_m) {
    for (const auto& snr : cfg.snr_db) cells.push_back({r, snr});
  }
  const std::size_t total = cells.size() * static_cast<std::size_t>(cfg.trials_per_cell);

  MonteCarloResult result;
  result.trials.resize(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const std::size_t cell = k / static_cast<std::size_t>(cfg.trials_per_cell);
      const int trial = static_cast<int>(k % static_cast<std::size_t>(cfg.trials_per_cell));
      result.trials[k] = run_trial(cfg, cells[cell], static_cast<int>(cell), trial);
    }
  };
  unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  std::vector<const TrialRecord*> all;
  for (const TrialRecord& t : result.trials) all.push_back(&t);
  const BreakdownRow overall = summarise(all, cfg.success_threshold_deg);
  MonteCarloSummary& s = result.summary;
  s.trials = overall.trials;
  s.success_count = overall.success_count;
  s.p50 = overall.p50;
  s.p90 = overall.p90;
  s.max = overall.max;
  s.octant_accuracy = overall.octant_accuracy;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<const TrialRecord*> in_cell;
    for (int t = 0; t < cfg.trials_per_cell; ++t) {
      in_cell.push_back(&result.trials[c * static_cast<std::size_t>(cfg.trials_per_cell) + static_cast<std::size_t>(t)]);
    }
    BreakdownRow row = summarise(in_cell, cfg.success_threshold_deg);
    row.range_m = cells[c].range_m;
    row.snr = cells[c].snr;
    s.rows.push_back(row);
  }
  return result;
}

void write_csv(std::ostream& out, const MonteCarloResult& result) {
  out << "trial,range_m,snr_db,true_az_deg,est_az_deg,az_err_deg,octant_true,octant_guess,converged,objective,iters\n";
  for (const TrialRecord& t : result.trials) {
    out << t.trial << ',' << format_number(t.range_m, "%.3f") << ',' << t.snr.label() << ','
        << format_number(t.true_az_deg, "%.6f") << ','
        << (t.est_az_deg ? format_number(*t.est_az_deg, "%.6f") : std::string("nan")) << ','
        << format_number(t.az_err_deg, "%.6f") << ',' << t.octant_true << ','
        << (t.octant_guess.empty() ? std::string("none") : t.octant_guess) << ',' << (t.converged ? 1 : 0) << ','
        << format_number(t.objective, "%.6e") << ',' << t.iters << '\n';
  }
  // Summary row: az_err_deg = p50 error, octant_guess = octant accuracy,
  // converged = success fraction.
  const MonteCarloSummary& s = result.summary;
  out << "summary,,,,," << format_number(s.p50, "%.6f") << ",," << format_number(s.octant_accuracy, "%.6f") << ','
      << format_number(s.success_fraction(), "%.6f") << ",,\n";
}

nlohmann::json to_json(const MonteCarloSummary& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (const BreakdownRow& r : s.rows) {
    rows.push_back({{"range_m", r.range_m},
                    {"snr_db", r.snr.to_json()},
                    {"trials", r.trials},
                    {"success_count", r.success_count},
                    {"p50", r.p50},
                    {"p90", r.p90},
                    {"max", r.max},
                    {"octant_accuracy", r.octant_accuracy},
                    {"detection_rate", r.detection_rate}});
  }
  return {{"trials", s.trials},
          {"success_count", s.success_count},
          {"success_fraction", s.success_fraction()},
          {"azimuth_error_deg", {{"p50", s.p50}, {"p90", s.p90}, {"max", s.max}}},
          {"octant_accuracy", s.octant_accuracy},
          {"rows", rows}};
}

}  // namespace pingloc
