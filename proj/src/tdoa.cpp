#include "pingloc/tdoa.hpp"

#include <cmath>
#include <limits>

#include "pingloc/error.hpp"

namespace pingloc {

FilteredRecording::FilteredRecording(const MultiChannelRecording& recording, const BiquadCascade& cascade,
                                     double rms_window)
    : sample_rate_(recording.sample_rate), length_(recording.length()) {
  channels_.reserve(static_cast<std::size_t>(recording.channel_count()));
  detectors_.reserve(static_cast<std::size_t>(recording.channel_count()));
  for (int c = 0; c < recording.channel_count(); ++c) {
    channels_.push_back(filter_signal(cascade, recording.channel(c)));
    detectors_.emplace_back(channels_.back(), sample_rate_, rms_window);
  }
}

TdoaSet select_stable_window(const MultiChannelRecording& recording, const BiquadCascade& cascade,
                             const HydrophoneArray& array, const WindowParams& params) {
  if (recording.channel_count() != 8) throw Error(ErrorCode::kInvalidArgument, "select_stable_window: expected 8 channels");
  return select_stable_window(FilteredRecording(recording, cascade, params.rms_window), array, params);
}

TdoaSet select_stable_window(const FilteredRecording& filtered, const HydrophoneArray& array,
                             const WindowParams& params, Eigen::Index search_from) {
  if (filtered.channel_count() != 8) throw Error(ErrorCode::kInvalidArgument, "select_stable_window: expected 8 channels");
  const double fs = filtered.sample_rate();
  const Eigen::Index n = filtered.length();

  TdoaSet out;
  out.sample_rate = fs;
  Eigen::Index onset = -1;
  for (int k = 0; k < 4 && onset < 0; ++k) {
    const int ch = array.precise_channel(k);
    if (auto hit = filtered.detector(ch).first_crossing(params.k_threshold, search_from)) {
      onset = *hit;
      out.reference_channel = ch;
    }
  }
  if (onset < 0) throw Error(ErrorCode::kNoPing, "no ping detected on any precise channel");
  out.onset_time_abs = static_cast<double>(onset) / fs;

  const double bound = array.max_precise_spacing() / params.sound_speed;
  const auto max_lag = static_cast<Eigen::Index>(std::ceil(bound * fs));
  const auto length = static_cast<Eigen::Index>(std::llround(params.window * fs));
  const auto hop = static_cast<Eigen::Index>(std::llround(params.hop * fs));
  const Eigen::Index sub_length = length / params.sub_windows;
  if (length <= 0 || sub_length <= 0 || params.sub_windows < 2) {
    throw Error(ErrorCode::kInvalidArgument, "select_stable_window: window too short for sub-windows");
  }

  auto pair_channels = [&array](int p) {
    return std::array<int, 2>{array.precise_channel(kPrecisePairs[static_cast<std::size_t>(p)][0]),
                              array.precise_channel(kPrecisePairs[static_cast<std::size_t>(p)][1])};
  };

  double best = std::numeric_limits<double>::infinity();
  Eigen::Index best_start = -1;
  for (int c = 0; c < params.candidates; ++c) {
    const Eigen::Index start = onset + c * hop;
    if (start + length + max_lag + 1 > n) break;
    double summed = 0.0;
    for (int p = 0; p < 6; ++p) {
      const auto [i, j] = pair_channels(p);
      Eigen::VectorXd lags(params.sub_windows);
      try {
        for (int s = 0; s < params.sub_windows; ++s) {
          lags[s] = estimate_delay_in_window(filtered.channel(i), filtered.channel(j), fs, max_lag,
                                             start + s * sub_length, sub_length)
                        .lag_samples;
        }
      } catch (const Error&) {
        summed = std::numeric_limits<double>::infinity();
        break;
      }
      summed += (lags.array() - lags.mean()).square().sum() / static_cast<double>(params.sub_windows - 1);
    }
    out.candidate_variances.push_back(summed / (fs * fs));
    if (summed < best) {
      best = summed;
      best_start = start;
    }
  }
  if (out.candidate_variances.empty()) throw Error(ErrorCode::kWindowTooLong, "window too long for remaining recording");
  if (!(best <= params.max_variance_samples)) {
    throw Error(ErrorCode::kUnstableWindow, "unstable window: delay variance " + std::to_string(best) + " samples^2");
  }

  out.window_start = best_start;
  out.window_length = length;
  out.window_variance = best / (fs * fs);
  for (int p = 0; p < 6; ++p) {
    const auto [i, j] = pair_channels(p);
    DelayEstimate est = estimate_delay_in_window(filtered.channel(i), filtered.channel(j), fs, max_lag, best_start, length);
    est.channel_i = i;
    est.channel_j = j;
    est.delta_t = std::clamp(est.delta_t, -bound, bound);
    out.pairwise.push_back(est);
  }

  // Coarse hydrophones can lead or lag the reference by up to the array span.
  double span = 0.0;
  for (int k = 0; k < 4; ++k) {
    span = std::max(span, (array.coarse.col(k) - array.position_of_channel(out.reference_channel)).norm());
  }
  const auto span_samples = static_cast<Eigen::Index>(std::ceil(span / params.sound_speed * fs));
  const auto rms_samples = static_cast<Eigen::Index>(std::llround(params.rms_window * fs));
  const Eigen::Index lo = std::max(search_from, onset - span_samples - rms_samples);
  const Eigen::Index hi = std::min(n, onset + span_samples + length + rms_samples);
  for (int k = 0; k < 4; ++k) {
    auto hit = filtered.detector(array.coarse_channel(k)).first_crossing(params.k_threshold, lo, hi);
    if (!hit) throw Error(ErrorCode::kNoPing, "no ping detected on coarse channel " + std::to_string(array.coarse_channel(k)));
    out.coarse_arrivals[static_cast<std::size_t>(k)] = static_cast<double>(*hit) / fs;
  }
  return out;
}

}  // namespace pingloc
