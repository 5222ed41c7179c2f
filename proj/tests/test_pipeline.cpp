#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "pingloc/pipeline.hpp"
#include "pingloc/scenario_json.hpp"
#include "pingloc/simulator.hpp"

using namespace pingloc;

namespace {

Scenario quiet(const Vec3& pinger, double duration, double repetition) {
  Scenario s;
  s.pinger.position = pinger;
  s.noise = NoiseSpec::none();
  s.record_duration = duration;
  s.pinger.repetition_interval = repetition;
  return s;
}

}  // namespace

TEST_CASE("one report per ping, bearing from the precise centroid") {
  const Scenario s = quiet(Vec3(10, 5, -2), 4.1, 2.0);
  std::vector<int> streamed;
  const LocalizationRun run = run_localization(s, {}, [&](const AzimuthReport& r) { streamed.push_back(r.ping_index); });
  REQUIRE(run.reports.size() == 3);
  CHECK(streamed == std::vector<int>{0, 1, 2});
  CHECK(run.diagnostics.empty());

  const Bearing truth = true_azimuth_elevation(s.pinger.position - s.array.precise_centroid());
  for (std::size_t k = 0; k < run.reports.size(); ++k) {
    const AzimuthReport& r = run.reports[k];
    CHECK(r.converged);
    CHECK(r.octant_guess == "++-");
    CHECK(std::abs(wrap_degrees(r.azimuth - truth.azimuth)) < 0.5);
    // The body-frame origin reading of the same example.
    CHECK(std::abs(wrap_degrees(r.azimuth - 26.565)) < 0.5);
    CHECK(r.objective >= 0.0);
    CHECK(r.azimuth >= 0.0);
    CHECK(r.azimuth < 360.0);
    const Bearing from_position = true_azimuth_elevation(r.position - s.array.precise_centroid());
    CHECK(r.azimuth == from_position.azimuth);
    CHECK(r.elevation == from_position.elevation);
    if (k > 0) {
      CHECK(r.ping_index > run.reports[k - 1].ping_index);
      CHECK(r.window_start > run.reports[k - 1].window_start);
    }
  }
}

TEST_CASE("recording file path gives the same reports") {
  Scenario s = quiet(Vec3(-6, 9, 1), 0.05, 0.05);
  s.noise = NoiseSpec{};
  s.seed = 5;
  const MultiChannelRecording rec = render_scene(s);
  const auto path = std::filesystem::temp_directory_path() / "pingloc_pipeline.oogw";
  write_recording(rec, path);
  const LocalizationRun from_file = localize_recording(read_recording(path), s.array, s.sound_speed, params_for(s));
  const LocalizationRun direct = run_localization(s);
  std::filesystem::remove(path);
  REQUIRE(from_file.reports.size() == 1);
  REQUIRE(direct.reports.size() == 1);
  CHECK(to_json(from_file.reports[0]).dump() == to_json(direct.reports[0]).dump());
}

TEST_CASE("report JSON") {
  AzimuthReport r;
  r.ping_index = 2;
  r.azimuth = 12.5;
  r.octant_guess = "+-+";
  r.window_start = 100;
  r.window_length = 1000;
  const nlohmann::json j = to_json(r);
  for (const char* key : {"ping_index", "azimuth", "elevation", "range", "octant_guess", "objective", "converged", "window"}) {
    CHECK(j.contains(key));
  }
  CHECK_FALSE(j.contains("timing"));
  CHECK(j["window"]["start"] == 100);
  CHECK(j["window"]["length"] == 1000);
  CHECK(to_json(r, true).contains("timing"));
}

TEST_CASE("no ping and bad recordings") {
  Scenario s = quiet(Vec3(10, 0, 0), 0.05, 0.05);
  MultiChannelRecording rec = render_scene(s);
  rec.samples.setZero();
  try {
    localize_recording(rec, s.array, s.sound_speed);
    FAIL("expected no ping");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNoPing);
  }
  rec.samples.conservativeResize(Eigen::NoChange, 7);
  CHECK_THROWS_AS(localize_recording(rec, s.array, s.sound_speed), Error);
}

TEST_CASE("truncated final ping is skipped with a diagnostic") {
  Scenario s = quiet(Vec3(8, 2, 1), 0.1068, 0.1);
  const LocalizationRun run = run_localization(s);
  CHECK(run.reports.size() == 1);
  CHECK(run.diagnostics.size() == 1);
}

TEST_CASE("scenario JSON") {
  const nlohmann::json doc = nlohmann::json::parse(R"({"pinger": {"position": [1, 2, 3], "frequency": 37500},
                                                        "noise": {"white_sigma": 0.2}, "seed": 9})");
  const Scenario s = scenario_from_json(doc);
  CHECK(s.pinger.position == Vec3(1, 2, 3));
  CHECK(s.pinger.frequency == 37500);
  CHECK(s.noise.white_sigma == 0.2);
  CHECK(s.noise.interferer_amp == NoiseSpec{}.interferer_amp);
  CHECK(s.seed == 9);

  const Scenario back = scenario_from_json(to_json(s));
  CHECK(to_json(back) == to_json(s));

  try {
    scenario_from_json(nlohmann::json::parse(R"({"sound_speed": 1500})"));
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfig);
    CHECK(std::string(e.what()).find("pinger") != std::string::npos);
  }
  CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(R"({"pinger": {"position": [1, 2]}})")), Error);
  CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(R"({"pinger": {"position": [1, 2, 3]}, "seed": "x"})")),
                  Error);
}
