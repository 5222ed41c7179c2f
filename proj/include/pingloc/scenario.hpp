#pragma once

#include <cstdint>
#include <string>

#include "pingloc/geometry.hpp"

namespace pingloc {

/// Additive noise applied after the analog front-end. Defaults are the
/// calibrated pool model: white floor, an 18 kHz interferer and thruster-band
/// rumble below 1 kHz.
struct NoiseSpec {
  double white_sigma = 0.1;
  double interferer_amp = 0.1;
  double interferer_freq = 18e3;
  double lowfreq_amp = 0.5;
  double lowfreq_cutoff = 1e3;

  bool is_zero() const { return white_sigma == 0.0 && interferer_amp == 0.0 && lowfreq_amp == 0.0; }
  static NoiseSpec none() { return {0.0, 0.0, 18e3, 0.0, 1e3}; }
};

/// Amplifier gain plus the analog band-pass in front of the DAQ.
struct ChannelModel {
  double gain = 10.0;
  double analog_band_low = 30e3;
  double analog_band_high = 50e3;
  int analog_order = 4;
};

struct Scenario {
  HydrophoneArray array = HydrophoneArray::default_array();
  PingerSource pinger;
  double sound_speed = kDefaultSoundSpeed;
  double sample_rate = 500e3;
  double record_duration = 2.0;
  NoiseSpec noise;
  ChannelModel front_end;
  std::uint64_t seed = 1;
};

/// Throws Error(kConfig) listing every violated scenario invariant, including
/// the array checks from validate_array.
void validate_scenario(const Scenario& scenario);

}  // namespace pingloc
