#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "pingloc/recording.hpp"
#include "pingloc/scenario.hpp"

namespace pingloc {

/// Raised-cosine on/off ramp length of every burst.
inline constexpr double kPingRamp = 0.5e-3;

/// Continuous-time pinger emission at time t (seconds): bursts of
/// ping_duration starting at 0, T, 2T, ..., zero before t = 0.
double ping_waveform(const PingerSource& pinger, double t);

Eigen::VectorXd synthesize_ping(const PingerSource& pinger, double sample_rate, double duration);

/// Spherical spreading and exact fractional delay per hydrophone, then the
/// front-end (band-pass and gain), then noise drawn from scenario.seed.
/// Channel k is the hydrophone carrying label k.
MultiChannelRecording render_scene(const Scenario& scenario);

/// Independent per-channel white noise, an 18 kHz-style interferer with random
/// phase, and low-passed rumble scaled to lowfreq_amp RMS.
MultiChannelRecording add_noise(const MultiChannelRecording& recording, const NoiseSpec& noise, std::uint64_t seed);

}  // namespace pingloc
