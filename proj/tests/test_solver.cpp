#include "doctest.h"

#include <cmath>
#include <random>

#include "pingloc/solver.hpp"
#include "support/oracles.hpp"

using namespace pingloc;

namespace {

const HydrophoneArray kArray = HydrophoneArray::default_array();

Vec3 random_source(std::mt19937_64& rng, double r_lo, double r_hi, double max_el_deg = 30.0) {
  std::uniform_real_distribution<double> az(0.0, 2.0 * oracle::kPi);
  std::uniform_real_distribution<double> el(-max_el_deg * oracle::kPi / 180.0, max_el_deg * oracle::kPi / 180.0);
  std::uniform_real_distribution<double> range(r_lo, r_hi);
  const double a = az(rng), e = el(rng), r = range(rng);
  return kArray.precise_centroid() + r * Vec3(std::cos(e) * std::cos(a), std::cos(e) * std::sin(a), std::sin(e));
}

TdoaProblem pair_problem(const Vec3& hi, const Vec3& hj, double delta_t) {
  TdoaProblem p;
  p.sound_speed = 1.0;
  for (int k = 0; k < 6; ++k) {
    p.first[k] = hi;
    p.second[k] = hj;
    p.delta_t[k] = delta_t;
  }
  p.reference = hi;
  p.precise.col(0) = hi;
  p.precise.col(1) = hj;
  p.precise.col(2) = hi + Vec3(0, 0, 100);
  p.precise.col(3) = hj + Vec3(0, 0, 100);
  return p;
}

double bearing_error(const Vec3& a, const Vec3& b) {
  return std::acos(std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0)) * 180.0 / oracle::kPi;
}

}  // namespace

TEST_CASE("residuals vanish at the truth and t0 only moves the anchor") {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    const Vec3 src = random_source(rng, 3.0, 40.0);
    const TdoaProblem problem = oracle::exact_problem(src, 0.25, kArray, 1480.0);
    const Residuals<double> r = residuals(Theta{src, 0.25}, problem);
    CHECK(r.cwiseAbs().maxCoeff() < 1e-12);
    const ObjectiveGradient<double> og = objective_and_gradient(Theta{src, 0.25}, problem);
    CHECK(og.value < 1e-24);
    CHECK(og.gradient.norm() < 1e-12);

    const Residuals<double> shifted = residuals(Theta{src, 0.25 + 3e-3}, problem);
    CHECK((shifted.head<6>() - r.head<6>()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(shifted(6) - r(6) == doctest::Approx(3e-3).epsilon(1e-9));
  }
}

TEST_CASE("two-hydrophone hand case") {
  const TdoaProblem problem = pair_problem(Vec3(0.5, 0, 0), Vec3(-0.5, 0, 0), -1.0);
  const Residuals<double> r = residuals(Theta{Vec3(2, 0, 0), -1.5}, problem);
  for (int k = 0; k < 7; ++k) CHECK(r(k) == doctest::Approx(0.0));

  // p = (2, 1, 0): d_i = sqrt(1.5^2 + 1), d_j = sqrt(2.5^2 + 1).
  const double di = std::sqrt(3.25), dj = std::sqrt(7.25);
  const double pair = di - dj + 1.0;
  const double t0 = 0.0;
  const double anchor = di + t0 - problem.onset_time;
  const ObjectiveGradient<double> og = objective_and_gradient(Theta{Vec3(2, 1, 0), t0}, problem);
  CHECK(og.value == doctest::Approx(0.5 * (6.0 * pair * pair + anchor * anchor)));
}

TEST_CASE("analytic gradient matches finite differences") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> noise(-20e-6, 20e-6);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int k = 0; k < 100; ++k) {
    TdoaProblem problem = oracle::exact_problem(random_source(rng, 2.0, 40.0), 0.1, kArray, 1480.0);
    for (double& d : problem.delta_t) d += noise(rng);
    const Theta theta{problem.centroid + Vec3(u(rng), u(rng), u(rng)), 0.1 + noise(rng) * 100.0};
    const Eigen::Vector4d analytic = objective_and_gradient(theta, problem).gradient;
    const Eigen::Vector4d fd = oracle::finite_difference_gradient(theta, problem, 1e-6);
    for (int i = 0; i < 4; ++i) {
      const double scale = std::max(std::abs(fd(i)), 1e-12 * fd.norm() + 1e-300);
      CHECK(std::abs(analytic(i) - fd(i)) / scale < 1e-5);
    }
  }
}

TEST_CASE("singular positions are rejected") {
  const TdoaProblem problem = oracle::exact_problem(Vec3(10, 0, 0), 0.0, kArray, 1480.0);
  const Vec3 on_hydrophone = kArray.precise.col(2);
  try {
    residuals(Theta{on_hydrophone, 0.0}, problem);
    FAIL("expected singular geometry");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingularGeometry);
  }
  CHECK_THROWS_AS(gradient_descent(Theta{on_hydrophone, 0.0}, problem, SolverParams{}), Error);
}

TEST_CASE("zero iteration budget returns the init") {
  const TdoaProblem problem = oracle::exact_problem(Vec3(10, 5, -2), 0.0, kArray, 1480.0);
  SolverParams params;
  params.max_iters = 0;
  const Theta init{Vec3(3, 3, 3), 0.01};
  const SolverResult r = gradient_descent(init, problem, params);
  CHECK(r.iterations == 0);
  CHECK_FALSE(r.converged);
  CHECK(r.theta.position == init.position);
  CHECK(r.theta.t0 == init.t0);
}

TEST_CASE("objective never increases with more iterations") {
  const TdoaProblem problem = oracle::exact_problem(Vec3(-12, 7, 3), 0.0, kArray, 1480.0);
  const Theta init{problem.centroid + Vec3(-5, 5, 5), 0.0};
  double previous = std::numeric_limits<double>::infinity();
  for (int iters = 1; iters <= 60; ++iters) {
    SolverParams params;
    params.max_iters = iters;
    const SolverResult r = gradient_descent(init, problem, params);
    const double pairwise = oracle::pairwise_objective(r.theta.position, problem);
    CHECK(pairwise <= previous);
    previous = pairwise;
  }
}

TEST_CASE("noiseless descent recovers the bearing and beats the grid oracle") {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 10; ++k) {
    const Vec3 src = random_source(rng, 5.0, 30.0);
    const TdoaProblem problem = oracle::exact_problem(src, 0.0, kArray, 1480.0);
    const Vec3 u = (src - problem.centroid).normalized();
    const SolverResult r = gradient_descent(Theta{problem.centroid + 10.0 * u, -1e-3}, problem, SolverParams{});
    CHECK(r.converged);
    CHECK(bearing_error(r.theta.position - problem.centroid, src - problem.centroid) < 0.5);
    const Bearing truth = true_azimuth_elevation(src - problem.centroid);
    CHECK(std::abs(wrap_degrees(r.azimuth - truth.azimuth)) < 0.5);
    CHECK(oracle::pairwise_objective(r.theta.position, problem) <= oracle::grid_search(problem).objective);
    // t0 is profiled, so the anchor residual is zero.
    CHECK(std::abs(residuals(r.theta, problem)(6)) < 1e-12);
  }
}

TEST_CASE("translation covariance") {
  const Vec3 src(9, -4, 2);
  const Vec3 shift(3.5, -1.25, 0.75);
  HydrophoneArray moved = kArray;
  moved.precise.colwise() += shift;
  moved.coarse.colwise() += shift;
  const TdoaProblem a = oracle::exact_problem(src, 0.0, kArray, 1480.0);
  const TdoaProblem b = oracle::exact_problem(src + shift, 0.0, moved, 1480.0);
  const Vec3 start(6, -2, 1);
  const SolverResult ra = gradient_descent(Theta{start, 0.0}, a, SolverParams{});
  const SolverResult rb = gradient_descent(Theta{start + shift, 0.0}, b, SolverParams{});
  CHECK((rb.theta.position - shift - ra.theta.position).norm() < 1e-6);
  CHECK(rb.azimuth == doctest::Approx(ra.azimuth).epsilon(1e-9));
}

TEST_CASE("mirror init can settle in the reflected minimum") {
  // Elevated source: the reflection through the precise-quad plane holds a
  // local minimum that is never better than the truth.
  const Vec3 src = kArray.precise_centroid() + Vec3(12, 6, 8);
  const TdoaProblem problem = oracle::exact_problem(src, 0.0, kArray, 1480.0);
  const Vec3 mirror = src - Vec3(0, 0, 2.0 * (src.z() - problem.centroid.z()));
  const SolverResult truth_side = gradient_descent(Theta{src * 0.9, 0.0}, problem, SolverParams{});
  const SolverResult mirror_side = gradient_descent(Theta{mirror, 0.0}, problem, SolverParams{});
  CHECK(truth_side.objective <= mirror_side.objective);
  const double az_gap = std::abs(wrap_degrees(mirror_side.azimuth - truth_side.azimuth));
  MESSAGE("mirror init: objective " << mirror_side.objective << " vs " << truth_side.objective
                                    << ", elevation " << mirror_side.elevation << ", azimuth gap " << az_gap);
  CHECK(az_gap < 1.0);
}

TEST_CASE("bad parameters are rejected") {
  const TdoaProblem problem = oracle::exact_problem(Vec3(10, 0, 0), 0.0, kArray, 1480.0);
  SolverParams p;
  p.backtrack = 1.5;
  CHECK_THROWS_AS(gradient_descent(Theta{Vec3(5, 5, 5), 0.0}, problem, p), Error);
  CHECK_THROWS_AS(gradient_descent(Theta{Vec3(std::nan(""), 5, 5), 0.0}, problem, SolverParams{}), Error);
}
