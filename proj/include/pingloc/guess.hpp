#pragma once

#include <array>

#include "pingloc/geometry.hpp"
#include "pingloc/solver.hpp"

namespace pingloc {

struct GuessParams {
  double radius = 10.0;
  double sound_speed = kDefaultSoundSpeed;
  /// Margins below this (seconds) flag the guess as low confidence.
  double low_confidence_margin = 0.0;
  double min_axis_separation = 1e-3;
};

struct OctantGuess {
  OctantId octant;
  Theta init;
  /// Smallest |arrival difference| among the three axis pairs, seconds.
  double margin = 0.0;
  bool low_confidence = false;
  /// Coarse indices (negative side, positive side) used for each axis.
  std::array<std::array<int, 2>, 3> axis_pairs{};
};

/// Octant from arrival order across one coarse pair per body axis: whichever
/// side hears the ping first is the side the pinger is on.
OctantGuess octant_guess(const std::array<double, 4>& coarse_arrivals, const Quad& coarse_positions,
                         const GuessParams& params = {});

Theta initial_point(OctantId octant, double radius, const Vec3& centroid, double sound_speed, double earliest_arrival);

}  // namespace pingloc
