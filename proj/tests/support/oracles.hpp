#pragma once

// Independent reference computations used by the tests. None of these call
// into the library's numerical code.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "pingloc/geometry.hpp"
#include "pingloc/solver.hpp"

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

// Closed-form Butterworth band-pass magnitude after prewarped bilinear mapping.
inline double butterworth_bandpass_magnitude(double f, int total_order, double f_lo, double f_hi, double fs) {
  auto warp = [fs](double x) { return 2.0 * fs * std::tan(kPi * x / fs); };
  const double w = warp(f);
  const double wl = warp(f_lo);
  const double wh = warp(f_hi);
  const double w0sq = wl * wh;
  const double q = (w * w - w0sq) / (w * (wh - wl));
  return 1.0 / std::sqrt(1.0 + std::pow(q * q, total_order / 2));
}

// Single-bin DFT magnitude, normalised so a unit sine reads 0.5 * N.
inline double dft_magnitude(const Eigen::VectorXd& x, double f, double fs) {
  std::complex<double> acc = 0.0;
  for (Eigen::Index n = 0; n < x.size(); ++n) {
    acc += x[n] * std::polar(1.0, -2.0 * kPi * f * static_cast<double>(n) / fs);
  }
  return std::abs(acc);
}

inline int zero_crossings(const Eigen::VectorXd& x) {
  int count = 0;
  for (Eigen::Index n = 1; n < x.size(); ++n) {
    if ((x[n - 1] < 0.0) != (x[n] < 0.0)) ++count;
  }
  return count;
}

// Band-limited multi-tone burst with a Hann envelope, evaluable at any time,
// so a fractional delay can be sampled exactly.
class ToneBurst {
 public:
  ToneBurst(unsigned seed, double duration, int tones = 24, double f_lo = 30e3, double f_hi = 50e3)
      : duration_(duration) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> freq(f_lo, f_hi);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    for (int k = 0; k < tones; ++k) tones_.push_back({freq(rng), phase(rng)});
  }

  double operator()(double t) const {
    if (t < 0.0 || t > duration_) return 0.0;
    const double env = 0.5 - 0.5 * std::cos(2.0 * kPi * t / duration_);
    double s = 0.0;
    for (const auto& [f, ph] : tones_) s += std::sin(2.0 * kPi * f * t + ph);
    return env * s;
  }

  Eigen::VectorXd sample(double fs, Eigen::Index n, double delay) const {
    Eigen::VectorXd x(n);
    for (Eigen::Index k = 0; k < n; ++k) x[k] = (*this)(static_cast<double>(k) / fs - delay);
    return x;
  }

 private:
  struct Tone {
    double f;
    double phase;
  };
  double duration_;
  std::vector<Tone> tones_;
};

// Central differences of the objective in long double.
inline Eigen::Vector4d finite_difference_gradient(const pingloc::Theta& theta, const pingloc::TdoaProblem& problem,
                                                  double h) {
  using LD = long double;
  Eigen::Vector4d g;
  for (int i = 0; i < 4; ++i) {
    pingloc::ThetaT<LD> plus{theta.position.cast<LD>(), static_cast<LD>(theta.t0)};
    pingloc::ThetaT<LD> minus = plus;
    if (i < 3) {
      plus.position(i) += h;
      minus.position(i) -= h;
    } else {
      plus.t0 += h;
      minus.t0 -= h;
    }
    const LD fp = 0.5L * pingloc::residuals(plus, problem).squaredNorm();
    const LD fm = 0.5L * pingloc::residuals(minus, problem).squaredNorm();
    g(i) = static_cast<double>((fp - fm) / (2.0L * static_cast<LD>(h)));
  }
  return g;
}

// Pairwise-only objective: the emission time drops out of range differences.
inline double pairwise_objective(const pingloc::Vec3& p, const pingloc::TdoaProblem& problem) {
  double f = 0.0;
  for (int k = 0; k < 6; ++k) {
    const double r = ((p - problem.first[k]).norm() - (p - problem.second[k]).norm()) / problem.sound_speed -
                     problem.delta_t[k];
    f += 0.5 * r * r;
  }
  return f;
}

struct GridBest {
  pingloc::Vec3 position;
  double objective;
};

// Exhaustive n^3 grid over a cube of half-width `half` around the precise
// centroid, skipping nodes inside the singular radius.
inline GridBest grid_search(const pingloc::TdoaProblem& problem, int n = 21, double half = 30.0) {
  GridBest best{problem.centroid, std::numeric_limits<double>::infinity()};
  const double step = 2.0 * half / (n - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const pingloc::Vec3 p = problem.centroid + pingloc::Vec3(-half + i * step, -half + j * step, -half + k * step);
        bool singular = false;
        for (int h = 0; h < 4; ++h) singular = singular || (p - problem.precise.col(h)).norm() < 1e-2;
        if (singular) continue;
        const double f = pairwise_objective(p, problem);
        if (f < best.objective) best = {p, f};
      }
    }
  }
  return best;
}

// Exact TDOA problem for a known source, no estimation involved.
inline pingloc::TdoaProblem exact_problem(const pingloc::Vec3& source, double t0, const pingloc::HydrophoneArray& array,
                                          double c) {
  pingloc::TdoaProblem p;
  p.sound_speed = c;
  p.precise = array.precise;
  p.centroid = array.precise_centroid();
  const std::array<std::array<int, 2>, 6> pairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  for (int k = 0; k < 6; ++k) {
    p.first[k] = array.precise.col(pairs[k][0]);
    p.second[k] = array.precise.col(pairs[k][1]);
    p.delta_t[k] = ((source - p.first[k]).norm() - (source - p.second[k]).norm()) / c;
  }
  p.reference = array.precise.col(0);
  p.onset_time = t0 + (source - p.reference).norm() / c;
  return p;
}

}  // namespace oracle
