#pragma once

#include <array>
#include <cmath>
#include <string>

#include <Eigen/Core>

#include "pingloc/error.hpp"
#include "pingloc/geometry.hpp"
#include "pingloc/tdoa.hpp"

namespace pingloc {

/// The 4-D unknown: source position and emission time.
template <typename Scalar>
struct ThetaT {
  Vec3T<Scalar> position = Vec3T<Scalar>::Zero();
  Scalar t0 = Scalar(0);
};
using Theta = ThetaT<double>;

inline constexpr double kSingularRadius = 1e-3;

/// A TdoaSet with channels resolved to hydrophone positions.
struct TdoaProblem {
  std::array<Vec3, 6> first;
  std::array<Vec3, 6> second;
  std::array<double, 6> delta_t{};
  Vec3 reference = Vec3::Zero();
  double onset_time = 0.0;
  double sound_speed = kDefaultSoundSpeed;
  Vec3 centroid = Vec3::Zero();
  Quad precise = Quad::Zero();

  static TdoaProblem from(const TdoaSet& tdoa, const HydrophoneArray& array, double sound_speed);
};

template <typename Scalar>
using Residuals = Eigen::Matrix<Scalar, 7, 1>;

template <typename Scalar>
void check_singular(const Vec3T<Scalar>& p, const TdoaProblem& problem) {
  for (int k = 0; k < 4; ++k) {
    if ((p - problem.precise.col(k).cast<Scalar>()).norm() < Scalar(kSingularRadius)) {
      throw Error(ErrorCode::kSingularGeometry, "singular geometry: position on a hydrophone");
    }
  }
}

/// Six pairwise range-difference residuals followed by the reference-channel
/// anchor residual, all in seconds.
template <typename Scalar>
Residuals<Scalar> residuals(const ThetaT<Scalar>& theta, const TdoaProblem& problem) {
  check_singular(theta.position, problem);
  const Scalar c = static_cast<Scalar>(problem.sound_speed);
  Residuals<Scalar> r;
  for (int k = 0; k < 6; ++k) {
    const Scalar di = (theta.position - problem.first[k].cast<Scalar>()).norm();
    const Scalar dj = (theta.position - problem.second[k].cast<Scalar>()).norm();
    r(k) = (di - dj) / c - static_cast<Scalar>(problem.delta_t[k]);
  }
  r(6) = (theta.position - problem.reference.cast<Scalar>()).norm() / c + theta.t0 -
         static_cast<Scalar>(problem.onset_time);
  return r;
}

template <typename Scalar>
Residuals<Scalar> residuals(const ThetaT<Scalar>& theta, const TdoaSet& tdoa, const HydrophoneArray& array,
                            double sound_speed) {
  return residuals(theta, TdoaProblem::from(tdoa, array, sound_speed));
}

template <typename Scalar>
struct ObjectiveGradient {
  Scalar value;
  /// d/dx, d/dy, d/dz, d/dt0.
  Eigen::Matrix<Scalar, 4, 1> gradient;
};

/// f = 0.5 * |r|^2 with the analytic gradient.
template <typename Scalar>
ObjectiveGradient<Scalar> objective_and_gradient(const ThetaT<Scalar>& theta, const TdoaProblem& problem) {
  const Residuals<Scalar> r = residuals(theta, problem);
  const Scalar c = static_cast<Scalar>(problem.sound_speed);
  auto unit = [&](const Vec3& h) -> Vec3T<Scalar> {
    const Vec3T<Scalar> d = theta.position - h.cast<Scalar>();
    return d / d.norm();
  };
  Vec3T<Scalar> grad_p = Vec3T<Scalar>::Zero();
  for (int k = 0; k < 6; ++k) grad_p += r(k) * (unit(problem.first[k]) - unit(problem.second[k])) / c;
  grad_p += r(6) * unit(problem.reference) / c;

  ObjectiveGradient<Scalar> out;
  out.value = Scalar(0.5) * r.squaredNorm();
  out.gradient << grad_p, r(6);
  return out;
}

template <typename Scalar>
ObjectiveGradient<Scalar> objective_and_gradient(const ThetaT<Scalar>& theta, const TdoaSet& tdoa,
                                                 const HydrophoneArray& array, double sound_speed) {
  return objective_and_gradient(theta, TdoaProblem::from(tdoa, array, sound_speed));
}

struct SolverParams {
  double step_size = 1.0;
  int max_iters = 5000;
  /// Tolerances apply to the range-scaled objective (residuals times c, metres).
  double grad_tol = 1e-9;
  double f_tol = 1e-15;
  double backtrack = 0.5;
  double armijo = 1e-4;
};

enum class StopReason { kNone, kGradient, kObjectiveChange, kNoProgress, kMaxIterations };

std::string_view to_string(StopReason reason);

struct SolverResult {
  Theta theta;
  /// 0.5 * |r|^2 in seconds^2.
  double objective = 0.0;
  /// Gradient norm of the range-scaled objective.
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  StopReason stop = StopReason::kNone;
  double azimuth = 0.0;
  double elevation = 0.0;
  double range = 0.0;
};

/// Gradient descent with Armijo backtracking. After every position step the
/// emission time takes its exact minimiser, so the t0 component of the
/// gradient is zero at each iterate. Azimuth/elevation are taken from the
/// precise-quad centroid.
SolverResult gradient_descent(const Theta& init, const TdoaProblem& problem, const SolverParams& params);
SolverResult gradient_descent(const Theta& init, const TdoaSet& tdoa, const HydrophoneArray& array,
                              double sound_speed, const SolverParams& params);

}  // namespace pingloc
