#include "pingloc/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pingloc/error.hpp"

namespace pingloc {

namespace {

using cplx = std::complex<double>;

std::vector<cplx> butterworth_prototype(int n) {
  std::vector<cplx> poles;
  for (int k = 1; k <= n; ++k) {
    const double theta = std::numbers::pi * (2.0 * k + n - 1.0) / (2.0 * n);
    poles.push_back(std::polar(1.0, theta));
  }
  return poles;
}

cplx bilinear(cplx s, double fs) { return (2.0 * fs + s) / (2.0 * fs - s); }

double prewarp(double f, double fs) { return 2.0 * fs * std::tan(std::numbers::pi * f / fs); }

// Groups digital poles into denominators: conjugate pairs first, then leftover
// real poles two at a time (a single trailing real pole becomes first order).
std::vector<std::pair<double, double>> pole_denominators(const std::vector<cplx>& poles) {
  std::vector<std::pair<double, double>> dens;
  std::vector<double> reals;
  for (const cplx& z : poles) {
    const double tol = 1e-12 * std::max(1.0, std::abs(z));
    if (z.imag() > tol) {
      dens.emplace_back(-2.0 * z.real(), std::norm(z));
    } else if (std::abs(z.imag()) <= tol) {
      reals.push_back(z.real());
    }
  }
  std::sort(reals.begin(), reals.end());
  for (std::size_t i = 0; i + 1 < reals.size(); i += 2) {
    dens.emplace_back(-(reals[i] + reals[i + 1]), reals[i] * reals[i + 1]);
  }
  if (reals.size() % 2 == 1) dens.emplace_back(-reals.back(), 0.0);
  return dens;
}

void normalise_gain(BiquadCascade& cascade, double reference_frequency) {
  const double mag = cascade.magnitude(reference_frequency);
  const double per_section = std::pow(1.0 / mag, 1.0 / static_cast<double>(cascade.sections.size()));
  for (Biquad& s : cascade.sections) {
    s.b0 *= per_section;
    s.b1 *= per_section;
    s.b2 *= per_section;
  }
}

}  // namespace

std::complex<double> BiquadCascade::response(double frequency) const {
  const cplx z_inv = std::polar(1.0, -2.0 * std::numbers::pi * frequency / fs);
  cplx h(1.0, 0.0);
  for (const Biquad& s : sections) h *= s.response(z_inv);
  return h;
}

double BiquadCascade::max_pole_radius() const {
  double radius = 0.0;
  for (const Biquad& s : sections) {
    // Roots of z^2 + a1 z + a2.
    const cplx disc = std::sqrt(cplx(s.a1 * s.a1 - 4.0 * s.a2, 0.0));
    radius = std::max({radius, std::abs((-s.a1 + disc) / 2.0), std::abs((-s.a1 - disc) / 2.0)});
  }
  return radius;
}

BiquadCascade design_bandpass(int order, double f_lo, double f_hi, double fs) {
  if (order < 2 || order % 2 != 0) throw Error(ErrorCode::kInvalidArgument, "band-pass order must be even and >= 2");
  if (!(fs > 0.0 && f_lo > 0.0 && f_lo < f_hi && f_hi < fs / 2.0)) {
    throw Error(ErrorCode::kInvalidArgument, "band-pass requires 0 < f_lo < f_hi < fs/2");
  }
  const int n = order / 2;
  const double w1 = prewarp(f_lo, fs);
  const double w2 = prewarp(f_hi, fs);
  const double w0 = std::sqrt(w1 * w2);
  const double bw = w2 - w1;

  std::vector<cplx> digital;
  for (const cplx& p : butterworth_prototype(n)) {
    const cplx root = std::sqrt(p * p * bw * bw - 4.0 * w0 * w0);
    digital.push_back(bilinear((p * bw + root) / 2.0, fs));
    digital.push_back(bilinear((p * bw - root) / 2.0, fs));
  }

  BiquadCascade cascade;
  cascade.order = order;
  cascade.f_lo = f_lo;
  cascade.f_hi = f_hi;
  cascade.fs = fs;
  // n zeros at z = 1 and n at z = -1: one (1 - z^-2) per section.
  for (const auto& [a1, a2] : pole_denominators(digital)) cascade.sections.push_back({1.0, 0.0, -1.0, a1, a2});

  const double centre = fs / std::numbers::pi * std::atan(w0 / (2.0 * fs));
  normalise_gain(cascade, centre);
  return cascade;
}

BiquadCascade design_lowpass(int order, double cutoff, double fs) {
  if (order < 1) throw Error(ErrorCode::kInvalidArgument, "low-pass order must be >= 1");
  if (!(fs > 0.0 && cutoff > 0.0 && cutoff < fs / 2.0)) {
    throw Error(ErrorCode::kInvalidArgument, "low-pass requires 0 < cutoff < fs/2");
  }
  const double wc = prewarp(cutoff, fs);
  std::vector<cplx> digital;
  for (const cplx& p : butterworth_prototype(order)) digital.push_back(bilinear(p * wc, fs));

  BiquadCascade cascade;
  cascade.order = order;
  cascade.f_hi = cutoff;
  cascade.fs = fs;
  for (const auto& [a1, a2] : pole_denominators(digital)) {
    if (a2 == 0.0) {
      cascade.sections.push_back({1.0, 1.0, 0.0, a1, 0.0});
    } else {
      cascade.sections.push_back({1.0, 2.0, 1.0, a1, a2});
    }
  }
  normalise_gain(cascade, 0.0);
  return cascade;
}

constexpr double kFlushBelow = 1e-200;

Eigen::VectorXd filter_signal(const BiquadCascade& cascade, const Eigen::Ref<const Eigen::VectorXd>& samples) {
  Eigen::VectorXd y = samples;
  for (const Biquad& s : cascade.sections) {
    double z1 = 0.0, z2 = 0.0;
    for (Eigen::Index n = 0; n < y.size(); ++n) {
      const double x = y[n];
      const double out = s.b0 * x + z1;
      z1 = s.b1 * x - s.a1 * out + z2;
      z2 = s.b2 * x - s.a2 * out;
      // Decaying tails on silent input would otherwise go subnormal and crawl.
      if (std::abs(z1) < kFlushBelow) z1 = 0.0;
      if (std::abs(z2) < kFlushBelow) z2 = 0.0;
      y[n] = out;
    }
  }
  return y;
}

}  // namespace pingloc
