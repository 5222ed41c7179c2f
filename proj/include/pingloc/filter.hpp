#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

namespace pingloc {

/// One second-order section, denominator normalised so a0 = 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;

  std::complex<double> response(std::complex<double> z_inv) const {
    return (b0 + z_inv * (b1 + z_inv * b2)) / (1.0 + z_inv * (a1 + z_inv * a2));
  }
};

struct BiquadCascade {
  std::vector<Biquad> sections;
  int order = 0;
  double f_lo = 0.0;
  double f_hi = 0.0;
  double fs = 0.0;

  std::complex<double> response(double frequency) const;
  double magnitude(double frequency) const { return std::abs(response(frequency)); }
  /// Largest pole radius over all sections; < 1 means stable.
  double max_pole_radius() const;
};

/// Butterworth band-pass of total order `order` (even, order/2 biquads),
/// designed by analog prototype, low-pass to band-pass transform and bilinear
/// transform with prewarped band edges. Peak gain is normalised to 1.
BiquadCascade design_bandpass(int order, double f_lo, double f_hi, double fs);

/// Butterworth low-pass with unit DC gain.
BiquadCascade design_lowpass(int order, double cutoff, double fs);

/// Causal forward filtering from zero initial state.
Eigen::VectorXd filter_signal(const BiquadCascade& cascade, const Eigen::Ref<const Eigen::VectorXd>& samples);

}  // namespace pingloc
