#include "doctest.h"

#include <cmath>
#include <random>

#include "pingloc/filter.hpp"
#include "support/oracles.hpp"

using namespace pingloc;

TEST_CASE("band-pass matches the reference design at fs = 500 kHz") {
  const BiquadCascade bp = design_bandpass(4, 30e3, 50e3, 500e3);
  REQUIRE(bp.sections.size() == 2);
  // Reference values from an independent Butterworth implementation.
  CHECK(bp.magnitude(18e3) == doctest::Approx(0.09594652872388156).epsilon(1e-9));
  CHECK(bp.magnitude(30e3) == doctest::Approx(0.7071067811865488).epsilon(1e-9));
  CHECK(bp.magnitude(50e3) == doctest::Approx(0.7071067811865486).epsilon(1e-9));
  CHECK(bp.magnitude(40e3) == doctest::Approx(0.9999142476358347).epsilon(1e-9));
  const double centre = 500e3 / oracle::kPi * std::atan(std::sqrt(2.0 * 500e3 * std::tan(oracle::kPi * 30e3 / 500e3) *
                                                                   2.0 * 500e3 * std::tan(oracle::kPi * 50e3 / 500e3)) /
                                                        (2.0 * 500e3));
  CHECK(centre == doctest::Approx(38833.942766351895));
  CHECK(bp.magnitude(centre) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bp.max_pole_radius() < 1.0);
}

TEST_CASE("band-pass agrees with the closed-form magnitude for several orders") {
  for (int order : {2, 4, 6, 8}) {
    const BiquadCascade bp = design_bandpass(order, 30e3, 50e3, 500e3);
    CHECK(bp.sections.size() == static_cast<std::size_t>(order / 2));
    for (double f = 1e3; f < 249e3; f += 3.7e3) {
      CHECK(bp.magnitude(f) == doctest::Approx(oracle::butterworth_bandpass_magnitude(f, order, 30e3, 50e3, 500e3))
                                   .epsilon(1e-9));
    }
  }
}

TEST_CASE("filtering a tone settles to the designed gain") {
  const BiquadCascade bp = design_bandpass(4, 30e3, 50e3, 500e3);
  const double fs = 500e3;
  for (double f : {18e3, 40e3, 60e3}) {
    Eigen::VectorXd x(20000);
    for (Eigen::Index n = 0; n < x.size(); ++n) x[n] = std::sin(2.0 * oracle::kPi * f * n / fs);
    const Eigen::VectorXd y = filter_signal(bp, x);
    const Eigen::VectorXd tail = y.tail(10000);
    const Eigen::VectorXd ref = x.tail(10000);
    const double ratio = oracle::dft_magnitude(tail, f, fs) / oracle::dft_magnitude(ref, f, fs);
    CHECK(ratio == doctest::Approx(bp.magnitude(f)).epsilon(1e-3));
  }
}

TEST_CASE("impulse response matches the transfer function") {
  const BiquadCascade bp = design_bandpass(4, 30e3, 50e3, 500e3);
  Eigen::VectorXd impulse = Eigen::VectorXd::Zero(8192);
  impulse[0] = 1.0;
  const Eigen::VectorXd h = filter_signal(bp, impulse);
  for (double f : {10e3, 35e3, 40e3, 47e3, 100e3}) {
    std::complex<double> acc = 0.0;
    for (Eigen::Index n = 0; n < h.size(); ++n) acc += h[n] * std::polar(1.0, -2.0 * oracle::kPi * f * n / 500e3);
    CHECK(std::abs(acc - bp.response(f)) < 1e-9);
  }
}

TEST_CASE("low-pass has unit DC gain and -3 dB at cutoff") {
  for (int order : {1, 2, 3}) {
    const BiquadCascade lp = design_lowpass(order, 1e3, 500e3);
    CHECK(lp.magnitude(0.0) == doctest::Approx(1.0));
    CHECK(lp.magnitude(1e3) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
    CHECK(lp.magnitude(10e3) < 0.2);
    CHECK(lp.max_pole_radius() < 1.0);
  }
}

TEST_CASE("invalid designs throw") {
  CHECK_THROWS_AS(design_bandpass(3, 30e3, 50e3, 500e3), Error);
  CHECK_THROWS_AS(design_bandpass(4, 50e3, 30e3, 500e3), Error);
  CHECK_THROWS_AS(design_bandpass(4, 30e3, 260e3, 500e3), Error);
  CHECK_THROWS_AS(design_bandpass(0, 30e3, 50e3, 500e3), Error);
  CHECK_THROWS_AS(design_lowpass(2, 0.0, 500e3), Error);
}

TEST_CASE("filter is linear and causal") {
  const BiquadCascade bp = design_bandpass(4, 30e3, 50e3, 500e3);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  Eigen::VectorXd a(2000), b(2000);
  for (Eigen::Index n = 0; n < a.size(); ++n) {
    a[n] = g(rng);
    b[n] = g(rng);
  }
  const Eigen::VectorXd lhs = filter_signal(bp, 2.0 * a - 3.0 * b);
  const Eigen::VectorXd rhs = 2.0 * filter_signal(bp, a) - 3.0 * filter_signal(bp, b);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);

  Eigen::VectorXd late = Eigen::VectorXd::Zero(2000);
  late.tail(500) = a.head(500);
  CHECK(filter_signal(bp, late).head(1500).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("DC and Nyquist are rejected and the impulse response decays") {
  const BiquadCascade bp = design_bandpass(4, 30e3, 50e3, 500e3);
  CHECK(bp.magnitude(0.0) < 1e-3);
  CHECK(bp.magnitude(250e3) < 1e-3);

  double peak = 0.0;
  double f_peak = 0.0;
  for (double f = 1.0; f < 250e3; f += 1.0) {
    const double m = bp.magnitude(f);
    if (m > peak) {
      peak = m;
      f_peak = f;
    }
  }
  CHECK(f_peak == doctest::Approx(38834.0).epsilon(1e-4));
  CHECK(bp.magnitude(40e3) >= 0.98 * peak);
  CHECK(bp.magnitude(30e3) == doctest::Approx(std::sqrt(0.5) * peak).epsilon(0.02));

  const Eigen::VectorXd dc = filter_signal(bp, Eigen::VectorXd::Ones(20000));
  CHECK(dc.tail(2000).cwiseAbs().maxCoeff() < 1e-3);

  Eigen::VectorXd impulse = Eigen::VectorXd::Zero(20000);
  impulse[0] = 1.0;
  const Eigen::VectorXd h = filter_signal(bp, impulse);
  CHECK(h.tail(1000).cwiseAbs().maxCoeff() < 1e-6 * h.cwiseAbs().maxCoeff());
}
