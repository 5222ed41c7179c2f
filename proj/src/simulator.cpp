#include "pingloc/simulator.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "pingloc/error.hpp"
#include "pingloc/filter.hpp"

namespace pingloc {

namespace {

std::mt19937_64 channel_rng(std::uint64_t seed, int channel, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(channel), stream};
  return std::mt19937_64(seq);
}

}  // namespace

double ping_waveform(const PingerSource& pinger, double t) {
  if (t < 0.0) return 0.0;
  const double local = std::fmod(t, pinger.repetition_interval);
  const double d = pinger.ping_duration;
  if (local >= d) return 0.0;
  const double ramp = std::min(kPingRamp, d / 2.0);
  double envelope = 1.0;
  if (local < ramp) {
    envelope = 0.5 * (1.0 - std::cos(std::numbers::pi * local / ramp));
  } else if (local > d - ramp) {
    envelope = 0.5 * (1.0 - std::cos(std::numbers::pi * (d - local) / ramp));
  }
  return pinger.amplitude * envelope * std::sin(2.0 * std::numbers::pi * pinger.frequency * local);
}

Eigen::VectorXd synthesize_ping(const PingerSource& pinger, double sample_rate, double duration) {
  if (!(duration > 0.0)) throw Error(ErrorCode::kInvalidArgument, "synthesize_ping: duration must be > 0");
  if (!(sample_rate > 0.0)) throw Error(ErrorCode::kInvalidArgument, "synthesize_ping: sample_rate must be > 0");
  const auto count = static_cast<Eigen::Index>(std::llround(duration * sample_rate));
  Eigen::VectorXd out(count);
  for (Eigen::Index n = 0; n < count; ++n) out[n] = ping_waveform(pinger, static_cast<double>(n) / sample_rate);
  return out;
}

MultiChannelRecording render_scene(const Scenario& s) {
  validate_scenario(s);
  const double fs = s.sample_rate;
  const auto count = static_cast<Eigen::Index>(std::llround(s.record_duration * fs));
  const BiquadCascade analog = design_bandpass(s.front_end.analog_order, s.front_end.analog_band_low,
                                               s.front_end.analog_band_high, fs);

  MultiChannelRecording rec;
  rec.sample_rate = fs;
  rec.samples.resize(count, 8);
  Eigen::VectorXd pressure(count);
  for (int k = 0; k < 8; ++k) {
    const Vec3 hydrophone = k < 4 ? Vec3(s.array.precise.col(k)) : Vec3(s.array.coarse.col(k - 4));
    const double range = (s.pinger.position - hydrophone).norm();
    const double delay = range / s.sound_speed;
    if (delay >= s.record_duration) {
      throw Error(ErrorCode::kOutOfWindow, "pinger out of recording window");
    }
    for (Eigen::Index n = 0; n < count; ++n) {
      pressure[n] = ping_waveform(s.pinger, static_cast<double>(n) / fs - delay) / range;
    }
    rec.samples.col(s.array.labels[static_cast<std::size_t>(k)]) =
        (s.front_end.gain * filter_signal(analog, pressure)).cast<float>();
  }
  return add_noise(rec, s.noise, s.seed);
}

MultiChannelRecording add_noise(const MultiChannelRecording& recording, const NoiseSpec& noise, std::uint64_t seed) {
  MultiChannelRecording out = recording;
  if (noise.is_zero() || out.length() == 0) return out;
  const double fs = out.sample_rate;
  const Eigen::Index count = out.length();

  std::optional<BiquadCascade> rumble_filter;
  if (noise.lowfreq_amp > 0.0) rumble_filter = design_lowpass(2, noise.lowfreq_cutoff, fs);

  for (int c = 0; c < out.channel_count(); ++c) {
    Eigen::VectorXd add = Eigen::VectorXd::Zero(count);
    std::normal_distribution<double> gauss(0.0, 1.0);

    if (noise.white_sigma > 0.0) {
      auto rng = channel_rng(seed, c, 1);
      for (Eigen::Index n = 0; n < count; ++n) add[n] += noise.white_sigma * gauss(rng);
    }
    if (noise.interferer_amp > 0.0) {
      auto rng = channel_rng(seed, c, 2);
      const double phase = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
      const double w = 2.0 * std::numbers::pi * noise.interferer_freq / fs;
      for (Eigen::Index n = 0; n < count; ++n) add[n] += noise.interferer_amp * std::sin(w * static_cast<double>(n) + phase);
    }
    if (rumble_filter) {
      auto rng = channel_rng(seed, c, 3);
      Eigen::VectorXd raw(count);
      for (Eigen::Index n = 0; n < count; ++n) raw[n] = gauss(rng);
      Eigen::VectorXd rumble = filter_signal(*rumble_filter, raw);
      const double rms = std::sqrt(rumble.squaredNorm() / static_cast<double>(count));
      if (rms > 0.0) add += (noise.lowfreq_amp / rms) * rumble;
    }
    out.samples.col(c) = (out.samples.col(c).cast<double>() + add).cast<float>();
  }
  return out;
}

}  // namespace pingloc
