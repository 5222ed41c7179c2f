#include "pingloc/guess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pingloc {

Theta initial_point(OctantId octant, double radius, const Vec3& centroid, double sound_speed, double earliest_arrival) {
  if (!(radius > 0.0)) throw Error(ErrorCode::kInvalidArgument, "initial_point: radius must be > 0");
  if (!(sound_speed > 0.0)) throw Error(ErrorCode::kInvalidArgument, "initial_point: sound_speed must be > 0");
  Theta theta;
  theta.position = centroid + radius * octant.signs() / std::sqrt(3.0);
  theta.t0 = earliest_arrival - radius / sound_speed;
  return theta;
}

OctantGuess octant_guess(const std::array<double, 4>& arrivals, const Quad& coarse, const GuessParams& params) {
  for (double t : arrivals) {
    if (!std::isfinite(t)) throw Error(ErrorCode::kInvalidArgument, "octant_guess: non-finite arrival");
  }
  OctantGuess guess;
  guess.margin = std::numeric_limits<double>::infinity();
  std::uint8_t bits = 0;
  constexpr const char* kAxis = "xyz";

  for (int axis = 0; axis < 3; ++axis) {
    // Widest separation along the axis; ties go to the pair most aligned with it.
    int best_i = -1, best_j = -1;
    double best_sep = -1.0, best_off = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        const Vec3 d = coarse.col(j) - coarse.col(i);
        const double sep = std::abs(d(axis));
        const double off = std::sqrt(std::max(0.0, d.squaredNorm() - sep * sep));
        const bool wider = sep > best_sep + 1e-12;
        const bool tie = std::abs(sep - best_sep) <= 1e-12 && off < best_off;
        if (wider || tie) {
          best_i = i;
          best_j = j;
          best_sep = sep;
          best_off = off;
        }
      }
    }
    if (best_sep < params.min_axis_separation) {
      throw Error(ErrorCode::kUnresolvableAxis, std::string("unresolvable axis: coarse quad degenerate along ") + kAxis[axis]);
    }
    const int neg = coarse(axis, best_i) < coarse(axis, best_j) ? best_i : best_j;
    const int pos = neg == best_i ? best_j : best_i;
    guess.axis_pairs[static_cast<std::size_t>(axis)] = {neg, pos};

    const double diff = arrivals[static_cast<std::size_t>(neg)] - arrivals[static_cast<std::size_t>(pos)];
    if (diff < 0.0) bits |= static_cast<std::uint8_t>(1U << axis);
    guess.margin = std::min(guess.margin, std::abs(diff));
  }

  guess.octant = {bits};
  guess.low_confidence = guess.margin == 0.0 || guess.margin < params.low_confidence_margin;
  const double earliest = *std::min_element(arrivals.begin(), arrivals.end());
  guess.init = initial_point(guess.octant, params.radius, coarse.rowwise().mean(), params.sound_speed, earliest);
  return guess;
}

}  // namespace pingloc
