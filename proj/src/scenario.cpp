#include "pingloc/scenario.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace pingloc {

void validate_scenario(const Scenario& s) {
  std::vector<std::string> problems;
  const PingerSource& p = s.pinger;
  if (!s.pinger.position.allFinite()) problems.emplace_back("pinger.position must be finite");
  if (!(p.frequency > 0.0)) problems.emplace_back("pinger.frequency must be > 0");
  if (!(p.ping_duration > 0.0 && p.ping_duration < p.repetition_interval)) {
    problems.emplace_back("pinger requires 0 < ping_duration < repetition_interval");
  }
  if (!(p.amplitude > 0.0)) problems.emplace_back("pinger.amplitude must be > 0");
  if (!(s.sound_speed > 0.0)) problems.emplace_back("sound_speed must be > 0");
  if (!(s.sample_rate > 2.0 * p.frequency)) problems.emplace_back("sample_rate must exceed twice pinger.frequency");
  if (!(s.record_duration >= p.repetition_interval)) {
    problems.emplace_back("record_duration must be >= pinger.repetition_interval");
  }

  const NoiseSpec& n = s.noise;
  if (n.white_sigma < 0.0 || n.interferer_amp < 0.0 || n.lowfreq_amp < 0.0) {
    problems.emplace_back("noise amplitudes must be >= 0");
  }
  if (n.interferer_freq < 0.0 || n.lowfreq_cutoff < 0.0) problems.emplace_back("noise frequencies must be >= 0");
  if (n.lowfreq_amp > 0.0 && !(n.lowfreq_cutoff > 0.0 && n.lowfreq_cutoff < s.sample_rate / 2.0)) {
    problems.emplace_back("noise.lowfreq_cutoff must lie in (0, sample_rate/2)");
  }

  const ChannelModel& fe = s.front_end;
  if (!(fe.gain > 0.0)) problems.emplace_back("front_end.gain must be > 0");
  if (!(fe.analog_band_low > 0.0 && fe.analog_band_low < fe.analog_band_high &&
        fe.analog_band_high < s.sample_rate / 2.0)) {
    problems.emplace_back("front_end requires 0 < analog_band_low < analog_band_high < sample_rate/2");
  }
  if (fe.analog_order < 2 || fe.analog_order % 2 != 0) problems.emplace_back("front_end.analog_order must be even and >= 2");

  if (p.frequency > 0.0 && s.sound_speed > 0.0) {
    const ValidationReport report = validate_array(s.array, p.frequency, s.sound_speed);
    for (const auto& v : report.violations) problems.push_back("array: " + v);
  }

  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "invalid scenario:";
    for (const auto& problem : problems) msg << "\n  - " << problem;
    throw Error(ErrorCode::kConfig, msg.str());
  }
}

}  // namespace pingloc
