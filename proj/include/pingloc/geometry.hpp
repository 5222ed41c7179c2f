#pragma once

// Body frame: +x forward, +y left, +z up. Azimuth is measured counterclockwise
// from +x in degrees on [0, 360); elevation is positive above the x-y plane.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pingloc/error.hpp"

namespace pingloc {

template <typename Scalar>
using Vec3T = Eigen::Matrix<Scalar, 3, 1>;
using Vec3 = Vec3T<double>;

/// Four hydrophone positions, one per column.
using Quad = Eigen::Matrix<double, 3, 4>;

inline constexpr double kDefaultSoundSpeed = 1480.0;
inline constexpr double kCoincidenceTolerance = 1e-6;

struct HydrophoneArray {
  Quad precise = Quad::Zero();
  Quad coarse = Quad::Zero();
  /// Recording channel of each hydrophone: precise[0..3] then coarse[0..3].
  std::array<int, 8> labels{0, 1, 2, 3, 4, 5, 6, 7};

  int precise_channel(int k) const { return labels[static_cast<std::size_t>(k)]; }
  int coarse_channel(int k) const { return labels[static_cast<std::size_t>(4 + k)]; }

  Vec3 precise_centroid() const { return precise.rowwise().mean(); }
  Vec3 coarse_centroid() const { return coarse.rowwise().mean(); }

  /// Largest pairwise distance inside the precise quad.
  double max_precise_spacing() const;

  /// Position of the hydrophone recorded on `channel`.
  Vec3 position_of_channel(int channel) const;

  /// 12 mm square with alternate corners at +-1 mm, centred at (0.2, 0, -0.1),
  /// plus a corner-tetrahedron coarse quad with one pair along each body axis.
  static HydrophoneArray default_array();
};

struct PingerSource {
  Vec3 position = Vec3::Zero();
  double frequency = 40e3;
  double ping_duration = 4e-3;
  double repetition_interval = 2.0;
  double amplitude = 1.0;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

ValidationReport validate_array(const HydrophoneArray& array, double frequency, double sound_speed);

template <typename DerivedA, typename DerivedB>
auto propagation_delay(const Eigen::MatrixBase<DerivedA>& source,
                       const Eigen::MatrixBase<DerivedB>& hydrophone,
                       typename DerivedA::Scalar sound_speed) {
  return (source - hydrophone).norm() / sound_speed;
}

struct Bearing {
  double azimuth = 0.0;    // degrees, [0, 360)
  double elevation = 0.0;  // degrees, [-90, 90]
};

template <typename Derived>
Bearing true_azimuth_elevation(const Eigen::MatrixBase<Derived>& direction) {
  const double x = static_cast<double>(direction(0));
  const double y = static_cast<double>(direction(1));
  const double z = static_cast<double>(direction(2));
  const double horizontal = std::hypot(x, y);
  if (horizontal == 0.0 && z == 0.0) {
    throw Error(ErrorCode::kUndefinedBearing, "undefined bearing: zero-length direction");
  }
  constexpr double kDeg = 180.0 / std::numbers::pi;
  double azimuth = std::atan2(y, x) * kDeg;
  if (azimuth < 0.0) azimuth += 360.0;
  if (azimuth >= 360.0) azimuth -= 360.0;
  return {azimuth, std::atan2(z, horizontal) * kDeg};
}

/// Octant as three sign bits; a set bit means the component is negative.
/// Exact zeros count as positive.
struct OctantId {
  std::uint8_t negative_bits = 0;

  bool negative(int axis) const { return (negative_bits >> axis) & 1U; }
  double sign(int axis) const { return negative(axis) ? -1.0 : 1.0; }
  Vec3 signs() const { return {sign(0), sign(1), sign(2)}; }
  OctantId flipped() const { return {static_cast<std::uint8_t>(negative_bits ^ 0b111U)}; }
  std::string to_string() const;

  friend bool operator==(OctantId, OctantId) = default;
};

template <typename Derived>
OctantId octant_of(const Eigen::MatrixBase<Derived>& direction) {
  std::uint8_t bits = 0;
  for (int axis = 0; axis < 3; ++axis) {
    if (direction(axis) < 0) bits |= static_cast<std::uint8_t>(1U << axis);
  }
  return {bits};
}

/// Signed angle difference a - b wrapped to (-180, 180].
double wrap_degrees(double a_minus_b);

}  // namespace pingloc
