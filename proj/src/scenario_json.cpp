#include "pingloc/scenario_json.hpp"

#include <fstream>

namespace pingloc {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(ErrorCode::kConfig, where + ": missing required field '" + key + "'");
  }
  return obj.at(key);
}

template <typename T>
void read_optional(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kConfig, where + "." + key + ": wrong type");
  }
}

Quad quad_from_json(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 4) {
    throw Error(ErrorCode::kConfig, where + ": expected exactly 4 positions");
  }
  Quad quad;
  for (int k = 0; k < 4; ++k) quad.col(k) = vec3_from_json(value[static_cast<std::size_t>(k)], where);
  return quad;
}

json quad_to_json(const Quad& quad) {
  json out = json::array();
  for (int k = 0; k < 4; ++k) out.push_back(vec3_to_json(quad.col(k)));
  return out;
}

}  // namespace

json vec3_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from_json(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 3) throw Error(ErrorCode::kConfig, where + ": expected [x, y, z]");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!value[static_cast<std::size_t>(i)].is_number()) throw Error(ErrorCode::kConfig, where + ": non-numeric coordinate");
    v(i) = value[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kConfig, "scenario: expected a JSON object");
  Scenario s;

  if (doc.contains("array")) {
    const json& a = doc.at("array");
    s.array.precise = quad_from_json(require(a, "precise", "array"), "array.precise");
    s.array.coarse = quad_from_json(require(a, "coarse", "array"), "array.coarse");
    if (a.contains("labels")) {
      const json& labels = a.at("labels");
      if (!labels.is_array() || labels.size() != 8) throw Error(ErrorCode::kConfig, "array.labels: expected 8 channel indices");
      for (std::size_t k = 0; k < 8; ++k) s.array.labels[k] = labels[k].get<int>();
    }
  }

  const json& pinger = require(doc, "pinger", "scenario");
  s.pinger.position = vec3_from_json(require(pinger, "position", "pinger"), "pinger.position");
  read_optional(pinger, "frequency", s.pinger.frequency, "pinger");
  read_optional(pinger, "ping_duration", s.pinger.ping_duration, "pinger");
  read_optional(pinger, "repetition_interval", s.pinger.repetition_interval, "pinger");
  read_optional(pinger, "amplitude", s.pinger.amplitude, "pinger");

  read_optional(doc, "sound_speed", s.sound_speed, "scenario");
  read_optional(doc, "sample_rate", s.sample_rate, "scenario");
  read_optional(doc, "record_duration", s.record_duration, "scenario");
  read_optional(doc, "seed", s.seed, "scenario");

  if (doc.contains("noise")) {
    const json& n = doc.at("noise");
    read_optional(n, "white_sigma", s.noise.white_sigma, "noise");
    read_optional(n, "interferer_amp", s.noise.interferer_amp, "noise");
    read_optional(n, "interferer_freq", s.noise.interferer_freq, "noise");
    read_optional(n, "lowfreq_amp", s.noise.lowfreq_amp, "noise");
    read_optional(n, "lowfreq_cutoff", s.noise.lowfreq_cutoff, "noise");
  }
  if (doc.contains("front_end")) {
    const json& fe = doc.at("front_end");
    read_optional(fe, "gain", s.front_end.gain, "front_end");
    read_optional(fe, "analog_band_low", s.front_end.analog_band_low, "front_end");
    read_optional(fe, "analog_band_high", s.front_end.analog_band_high, "front_end");
    read_optional(fe, "analog_order", s.front_end.analog_order, "front_end");
  }
  return s;
}

json to_json(const Scenario& s) {
  json labels = json::array();
  for (int label : s.array.labels) labels.push_back(label);
  return {
      {"array", {{"precise", quad_to_json(s.array.precise)}, {"coarse", quad_to_json(s.array.coarse)}, {"labels", labels}}},
      {"pinger",
       {{"position", vec3_to_json(s.pinger.position)},
        {"frequency", s.pinger.frequency},
        {"ping_duration", s.pinger.ping_duration},
        {"repetition_interval", s.pinger.repetition_interval},
        {"amplitude", s.pinger.amplitude}}},
      {"sound_speed", s.sound_speed},
      {"sample_rate", s.sample_rate},
      {"record_duration", s.record_duration},
      {"noise",
       {{"white_sigma", s.noise.white_sigma},
        {"interferer_amp", s.noise.interferer_amp},
        {"interferer_freq", s.noise.interferer_freq},
        {"lowfreq_amp", s.noise.lowfreq_amp},
        {"lowfreq_cutoff", s.noise.lowfreq_cutoff}}},
      {"front_end",
       {{"gain", s.front_end.gain},
        {"analog_band_low", s.front_end.analog_band_low},
        {"analog_band_high", s.front_end.analog_band_high},
        {"analog_order", s.front_end.analog_order}}},
      {"seed", s.seed},
  };
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open config " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kConfig, path.string() + ": " + e.what());
  }
}

}  // namespace pingloc
