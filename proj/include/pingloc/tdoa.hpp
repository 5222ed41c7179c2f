#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "pingloc/delay.hpp"
#include "pingloc/filter.hpp"
#include "pingloc/geometry.hpp"
#include "pingloc/recording.hpp"

namespace pingloc {

struct WindowParams {
  double window = 2e-3;
  double hop = 0.5e-3;
  int candidates = 8;
  int sub_windows = 4;
  double k_threshold = 5.0;
  double rms_window = 1e-3;
  /// Summed delay variance limit in sample periods squared.
  double max_variance_samples = 0.25;
  double sound_speed = kDefaultSoundSpeed;
};

/// Time differences for one ping: all six precise pairs from the chosen
/// window plus absolute onsets on the coarse quad.
struct TdoaSet {
  int reference_channel = -1;
  double onset_time_abs = 0.0;
  /// Precise-quad pairs in order (0,1) (0,2) (0,3) (1,2) (1,3) (2,3).
  std::vector<DelayEstimate> pairwise;
  /// Absolute onset (seconds) of each coarse hydrophone, coarse order.
  std::array<double, 4> coarse_arrivals{};
  Eigen::Index window_start = 0;
  Eigen::Index window_length = 0;
  /// Summed across-sub-window delay variance of the chosen window, seconds^2.
  double window_variance = 0.0;
  std::vector<double> candidate_variances;
  double sample_rate = 0.0;
};

/// Precise-quad index pairs in TdoaSet order.
inline constexpr std::array<std::array<int, 2>, 6> kPrecisePairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Band-passed channels with their onset detectors, built once per recording.
class FilteredRecording {
 public:
  FilteredRecording(const MultiChannelRecording& recording, const BiquadCascade& cascade, double rms_window = 1e-3);

  const Eigen::VectorXd& channel(int c) const { return channels_[static_cast<std::size_t>(c)]; }
  const OnsetDetector& detector(int c) const { return detectors_[static_cast<std::size_t>(c)]; }
  int channel_count() const { return static_cast<int>(channels_.size()); }
  double sample_rate() const { return sample_rate_; }
  Eigen::Index length() const { return length_; }

 private:
  std::vector<Eigen::VectorXd> channels_;
  std::vector<OnsetDetector> detectors_;
  double sample_rate_ = 0.0;
  Eigen::Index length_ = 0;
};

TdoaSet select_stable_window(const MultiChannelRecording& recording, const BiquadCascade& cascade,
                             const HydrophoneArray& array, const WindowParams& params);

/// Processes the first ping whose reference onset is at or after `search_from`.
TdoaSet select_stable_window(const FilteredRecording& filtered, const HydrophoneArray& array,
                             const WindowParams& params, Eigen::Index search_from = 0);

}  // namespace pingloc
