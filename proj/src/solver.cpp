#include "pingloc/solver.hpp"

#include <limits>
#include <optional>

namespace pingloc {

TdoaProblem TdoaProblem::from(const TdoaSet& tdoa, const HydrophoneArray& array, double sound_speed) {
  if (tdoa.pairwise.size() != 6) throw Error(ErrorCode::kInvalidArgument, "TdoaSet must hold all 6 precise pairs");
  if (!(sound_speed > 0.0)) throw Error(ErrorCode::kInvalidArgument, "sound_speed must be > 0");
  TdoaProblem problem;
  for (std::size_t k = 0; k < 6; ++k) {
    problem.first[k] = array.position_of_channel(tdoa.pairwise[k].channel_i);
    problem.second[k] = array.position_of_channel(tdoa.pairwise[k].channel_j);
    problem.delta_t[k] = tdoa.pairwise[k].delta_t;
  }
  problem.reference = array.position_of_channel(tdoa.reference_channel);
  problem.onset_time = tdoa.onset_time_abs;
  problem.sound_speed = sound_speed;
  problem.centroid = array.precise_centroid();
  problem.precise = array.precise;
  return problem;
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kNone: return "none";
    case StopReason::kGradient: return "gradient";
    case StopReason::kObjectiveChange: return "objective_change";
    case StopReason::kNoProgress: return "no_progress";
    case StopReason::kMaxIterations: return "max_iterations";
  }
  return "unknown";
}

namespace {

// Position-only view with t0 at its minimiser: the anchor residual vanishes and
// the remaining residuals are expressed as range differences in metres.
struct ScaledPoint {
  double value = 0.0;
  Vec3 gradient = Vec3::Zero();
};

std::optional<ScaledPoint> evaluate(const Vec3& p, const TdoaProblem& problem) {
  for (int k = 0; k < 4; ++k) {
    if ((p - problem.precise.col(k)).norm() < kSingularRadius) return std::nullopt;
  }
  ScaledPoint out;
  const double c = problem.sound_speed;
  for (int k = 0; k < 6; ++k) {
    const Vec3 di = p - problem.first[k];
    const Vec3 dj = p - problem.second[k];
    const double ni = di.norm();
    const double nj = dj.norm();
    const double r = (ni - nj) - c * problem.delta_t[k];
    out.value += 0.5 * r * r;
    out.gradient += r * (di / ni - dj / nj);
  }
  if (!std::isfinite(out.value) || !out.gradient.allFinite()) return std::nullopt;
  return out;
}

double best_t0(const Vec3& p, const TdoaProblem& problem) {
  return problem.onset_time - (p - problem.reference).norm() / problem.sound_speed;
}

SolverResult finish(const Vec3& p, double t0, const TdoaProblem& problem, double grad_norm, int iterations,
                    StopReason stop) {
  SolverResult result;
  result.theta = {p, t0};
  result.objective = objective_and_gradient(result.theta, problem).value;
  result.grad_norm = grad_norm;
  result.iterations = iterations;
  result.stop = stop;
  result.converged = stop == StopReason::kGradient || stop == StopReason::kObjectiveChange ||
                     stop == StopReason::kNoProgress;
  const Vec3 direction = p - problem.centroid;
  result.range = direction.norm();
  if (result.range > 0.0) {
    const Bearing bearing = true_azimuth_elevation(direction);
    result.azimuth = bearing.azimuth;
    result.elevation = bearing.elevation;
  }
  return result;
}

}  // namespace

SolverResult gradient_descent(const Theta& init, const TdoaProblem& problem, const SolverParams& params) {
  if (!init.position.allFinite() || !std::isfinite(init.t0)) {
    throw Error(ErrorCode::kInvalidArgument, "gradient_descent: non-finite initial point");
  }
  if (!(params.step_size > 0.0 && params.grad_tol > 0.0 && params.f_tol > 0.0 && params.backtrack > 0.0 &&
        params.backtrack < 1.0 && params.armijo > 0.0 && params.armijo < 1.0 && params.max_iters >= 0)) {
    throw Error(ErrorCode::kInvalidArgument, "gradient_descent: invalid solver parameters");
  }
  const ObjectiveGradient<double> start = objective_and_gradient(init, problem);  // throws on singular init
  if (!std::isfinite(start.value)) throw Error(ErrorCode::kDiverged, "diverged: non-finite objective at init");
  const double c = problem.sound_speed;
  if (params.max_iters == 0) {
    Eigen::Vector4d scaled = start.gradient * (c * c);
    scaled(3) /= c;  // t0 measured in metres (c * t0)
    return finish(init.position, init.t0, problem, scaled.norm(), 0, StopReason::kMaxIterations);
  }

  Vec3 p = init.position;
  auto current = evaluate(p, problem);
  if (!current) throw Error(ErrorCode::kDiverged, "diverged: non-finite objective at init");

  double step = params.step_size;
  int iterations = 0;
  StopReason stop = StopReason::kMaxIterations;
  while (true) {
    const double grad_sq = current->gradient.squaredNorm();
    if (std::sqrt(grad_sq) <= params.grad_tol) {
      stop = StopReason::kGradient;
      break;
    }
    if (iterations >= params.max_iters) break;

    double trial_step = iterations == 0 ? params.step_size : 2.0 * step;
    std::optional<ScaledPoint> next;
    Vec3 candidate;
    while (true) {
      candidate = p - trial_step * current->gradient;
      if (candidate == p) break;  // step below position resolution
      next = evaluate(candidate, problem);
      if (next && next->value <= current->value - params.armijo * trial_step * grad_sq) break;
      next.reset();
      trial_step *= params.backtrack;
    }
    if (!next) {
      stop = StopReason::kNoProgress;
      break;
    }
    if (!std::isfinite(next->value)) throw Error(ErrorCode::kDiverged, "diverged: non-finite objective");

    const double change = current->value - next->value;
    p = candidate;
    current = next;
    step = trial_step;
    ++iterations;
    if (change <= params.f_tol) {
      stop = StopReason::kObjectiveChange;
      break;
    }
  }
  return finish(p, best_t0(p, problem), problem, current->gradient.norm(), iterations, stop);
}

SolverResult gradient_descent(const Theta& init, const TdoaSet& tdoa, const HydrophoneArray& array,
                              double sound_speed, const SolverParams& params) {
  return gradient_descent(init, TdoaProblem::from(tdoa, array, sound_speed), params);
}

}  // namespace pingloc
