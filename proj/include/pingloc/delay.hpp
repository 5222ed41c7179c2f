#pragma once

#include <optional>

#include <Eigen/Core>

namespace pingloc {

struct DelayEstimate {
  int channel_i = -1;
  int channel_j = -1;
  /// Arrival at i minus arrival at j, seconds.
  double delta_t = 0.0;
  /// Sub-sample peak lag (delta_t * fs) before any physical clamping.
  double lag_samples = 0.0;
  Eigen::Index integer_lag = 0;
  double peak_correlation = 0.0;
};

/// Normalised cross-correlation of the whole buffers over lags in
/// [-max_lag, max_lag], integer peak refined by a 3-point parabola.
/// Swapping a and b negates delta_t exactly.
DelayEstimate estimate_delay(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                             double sample_rate, Eigen::Index max_lag);

/// Same estimator with b restricted to [start, start + length) and a slid
/// across it; samples outside the buffers count as zero.
DelayEstimate estimate_delay_in_window(const Eigen::Ref<const Eigen::VectorXd>& a,
                                       const Eigen::Ref<const Eigen::VectorXd>& b, double sample_rate,
                                       Eigen::Index max_lag, Eigen::Index start, Eigen::Index length);

/// Centred moving-RMS energy detector. The noise floor is the median of the
/// moving RMS over the whole buffer.
class OnsetDetector {
 public:
  OnsetDetector(const Eigen::Ref<const Eigen::VectorXd>& samples, double sample_rate, double rms_window = 1e-3);

  double noise_floor() const { return floor_; }
  const Eigen::VectorXd& moving_rms() const { return rms_; }

  /// First index in [from, to) whose moving RMS exceeds k * noise floor.
  std::optional<Eigen::Index> first_crossing(double k_threshold, Eigen::Index from = 0,
                                             Eigen::Index to = -1) const;

 private:
  Eigen::VectorXd rms_;
  double floor_ = 0.0;
};

/// Onset sample of the first ping at or after `from`; throws kNoPing.
Eigen::Index detect_ping(const Eigen::Ref<const Eigen::VectorXd>& samples, double sample_rate,
                         double k_threshold = 5.0, Eigen::Index from = 0);

}  // namespace pingloc
