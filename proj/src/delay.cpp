#include "pingloc/delay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pingloc/error.hpp"

namespace pingloc {

namespace {

struct Peak {
  Eigen::Index lag = 0;
  double value = 0.0;
  double refined = 0.0;
};

// Height of a sampled cosine through three points; falls back to the
// parabola vertex when the points do not fit one.
double interpolated_height(double before, double peak, double after) {
  if (peak <= 0.0) return peak;
  const double cos_w = (before + after) / (2.0 * peak);
  if (cos_w > -1.0 && cos_w < 1.0) {
    const double sin_w = std::sqrt(1.0 - cos_w * cos_w);
    const double tan_phase = (after - before) / (2.0 * peak * sin_w);
    return peak * std::sqrt(1.0 + tan_phase * tan_phase);
  }
  const double curvature = (before + after) - 2.0 * peak;
  if (curvature >= 0.0) return peak;
  return peak - (after - before) * (after - before) / (8.0 * curvature);
}

// corr(l) must be defined for l in [-max_lag - 1, max_lag + 1].
template <typename Corr>
Peak find_peak(Corr&& corr, Eigen::Index max_lag) {
  std::vector<double> values(static_cast<std::size_t>(2 * max_lag + 3));
  for (Eigen::Index l = -max_lag - 1; l <= max_lag + 1; ++l) values[static_cast<std::size_t>(l + max_lag + 1)] = corr(l);
  auto at = [&](Eigen::Index l) { return values[static_cast<std::size_t>(l + max_lag + 1)]; };

  // Narrowband correlations repeat every carrier cycle and the integer grid
  // can undersample the true peak by more than the envelope separates
  // neighbouring cycles, so local maxima are ranked by interpolated height.
  Peak peak{-max_lag, at(-max_lag), 0.0};
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index l = -max_lag; l <= max_lag; ++l) {
    const double y0 = at(l);
    if (y0 < at(l - 1) || y0 < at(l + 1)) continue;
    const double height = interpolated_height(at(l - 1), y0, at(l + 1));
    if (height > best) {
      best = height;
      peak = {l, y0, 0.0};
    }
  }
  if (!std::isfinite(best)) {
    for (Eigen::Index l = -max_lag + 1; l <= max_lag; ++l) {
      if (at(l) > peak.value) peak = {l, at(l), 0.0};
    }
  }
  const double before = at(peak.lag - 1);
  const double after = at(peak.lag + 1);
  // Written so that mirroring the correlation negates the offset exactly.
  const double curvature = (before + after) - 2.0 * peak.value;
  double offset = 0.0;
  if (curvature < 0.0) offset = std::clamp(0.5 * (before - after) / curvature, -0.5, 0.5);
  peak.refined = static_cast<double>(peak.lag) + offset;
  return peak;
}

DelayEstimate to_estimate(const Peak& peak, double fs) {
  DelayEstimate est;
  est.integer_lag = peak.lag;
  est.lag_samples = peak.refined;
  est.delta_t = peak.refined / fs;
  est.peak_correlation = std::clamp(peak.value, -1.0, 1.0);
  return est;
}

}  // namespace

DelayEstimate estimate_delay(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                             double sample_rate, Eigen::Index max_lag) {
  if (a.size() != b.size()) throw Error(ErrorCode::kInvalidArgument, "estimate_delay: buffers differ in length");
  if (max_lag < 0) throw Error(ErrorCode::kInvalidArgument, "estimate_delay: negative max_lag");
  const double energy = a.squaredNorm() * b.squaredNorm();
  if (!(energy > 0.0)) throw Error(ErrorCode::kDegenerateSignal, "degenerate signal: zero energy");
  const double norm = std::sqrt(energy);
  const Eigen::Index n = a.size();

  auto corr = [&](Eigen::Index lag) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, -lag);
    const Eigen::Index hi = std::min<Eigen::Index>(n, n - lag);
    double sum = 0.0;
    for (Eigen::Index k = lo; k < hi; ++k) sum += a[k + lag] * b[k];
    return sum / norm;
  };
  return to_estimate(find_peak(corr, max_lag), sample_rate);
}

DelayEstimate estimate_delay_in_window(const Eigen::Ref<const Eigen::VectorXd>& a,
                                       const Eigen::Ref<const Eigen::VectorXd>& b, double sample_rate,
                                       Eigen::Index max_lag, Eigen::Index start, Eigen::Index length) {
  if (max_lag < 0 || length <= 0) throw Error(ErrorCode::kInvalidArgument, "estimate_delay_in_window: bad window");
  const Eigen::Index na = a.size();
  const Eigen::Index nb = b.size();
  const Eigen::Index b_lo = std::clamp<Eigen::Index>(start, 0, nb);
  const Eigen::Index b_hi = std::clamp<Eigen::Index>(start + length, 0, nb);
  const double b_energy = b.segment(b_lo, b_hi - b_lo).squaredNorm();
  if (!(b_energy > 0.0)) throw Error(ErrorCode::kDegenerateSignal, "degenerate signal: zero energy in window");

  auto corr = [&](Eigen::Index lag) {
    const Eigen::Index lo = std::max(b_lo, -lag);
    const Eigen::Index hi = std::min(b_hi, na - lag);
    double sum = 0.0;
    double a_energy = 0.0;
    for (Eigen::Index k = lo; k < hi; ++k) {
      sum += a[k + lag] * b[k];
      a_energy += a[k + lag] * a[k + lag];
    }
    return a_energy > 0.0 ? sum / std::sqrt(a_energy * b_energy) : 0.0;
  };
  return to_estimate(find_peak(corr, max_lag), sample_rate);
}

OnsetDetector::OnsetDetector(const Eigen::Ref<const Eigen::VectorXd>& samples, double sample_rate, double rms_window) {
  const Eigen::Index n = samples.size();
  const Eigen::Index width = std::max<Eigen::Index>(1, std::llround(rms_window * sample_rate));
  const Eigen::Index half = width / 2;
  std::vector<double> prefix(static_cast<std::size_t>(n + 1), 0.0);
  for (Eigen::Index k = 0; k < n; ++k) prefix[static_cast<std::size_t>(k + 1)] = prefix[static_cast<std::size_t>(k)] + samples[k] * samples[k];

  rms_.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index lo = std::clamp<Eigen::Index>(k - half, 0, n);
    const Eigen::Index hi = std::clamp<Eigen::Index>(k - half + width, 0, n);
    const double energy = prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)];
    rms_[k] = std::sqrt(std::max(0.0, energy) / static_cast<double>(width));
  }
  if (n > 0) {
    std::vector<double> sorted(rms_.data(), rms_.data() + n);
    auto mid = sorted.begin() + n / 2;
    std::nth_element(sorted.begin(), mid, sorted.end());
    floor_ = *mid;
  }
}

std::optional<Eigen::Index> OnsetDetector::first_crossing(double k_threshold, Eigen::Index from, Eigen::Index to) const {
  const Eigen::Index end = (to < 0 || to > rms_.size()) ? rms_.size() : to;
  const double threshold = k_threshold * floor_;
  for (Eigen::Index k = std::max<Eigen::Index>(0, from); k < end; ++k) {
    if (rms_[k] > threshold) return k;
  }
  return std::nullopt;
}

Eigen::Index detect_ping(const Eigen::Ref<const Eigen::VectorXd>& samples, double sample_rate, double k_threshold,
                         Eigen::Index from) {
  if (!(k_threshold > 1.0)) throw Error(ErrorCode::kInvalidArgument, "detect_ping: k_threshold must be > 1");
  const OnsetDetector detector(samples, sample_rate);
  if (auto onset = detector.first_crossing(k_threshold, from)) return *onset;
  throw Error(ErrorCode::kNoPing, "no ping detected");
}

}  // namespace pingloc
