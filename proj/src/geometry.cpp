#include "pingloc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace pingloc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kConfig: return "config error";
    case ErrorCode::kUndefinedBearing: return "undefined bearing";
    case ErrorCode::kOutOfWindow: return "pinger out of recording window";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kBadMagic: return "bad magic";
    case ErrorCode::kVersionMismatch: return "version mismatch";
    case ErrorCode::kTruncatedPayload: return "truncated payload";
    case ErrorCode::kDegenerateSignal: return "degenerate signal";
    case ErrorCode::kNoPing: return "no ping";
    case ErrorCode::kWindowTooLong: return "window too long";
    case ErrorCode::kUnstableWindow: return "unstable window";
    case ErrorCode::kSingularGeometry: return "singular geometry";
    case ErrorCode::kDiverged: return "diverged";
    case ErrorCode::kUnresolvableAxis: return "unresolvable axis";
  }
  return "unknown";
}

double HydrophoneArray::max_precise_spacing() const {
  double widest = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      widest = std::max(widest, (precise.col(i) - precise.col(j)).norm());
    }
  }
  return widest;
}

Vec3 HydrophoneArray::position_of_channel(int channel) const {
  for (int k = 0; k < 8; ++k) {
    if (labels[static_cast<std::size_t>(k)] == channel) {
      return k < 4 ? Vec3(precise.col(k)) : Vec3(coarse.col(k - 4));
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "no hydrophone on channel " + std::to_string(channel));
}

HydrophoneArray HydrophoneArray::default_array() {
  HydrophoneArray array;
  constexpr double kHalfSide = 0.006;
  constexpr double kRaise = 0.001;
  const Vec3 centre(0.2, 0.0, -0.1);
  array.precise.col(0) = centre + Vec3(kHalfSide, kHalfSide, kRaise);
  array.precise.col(1) = centre + Vec3(-kHalfSide, kHalfSide, -kRaise);
  array.precise.col(2) = centre + Vec3(-kHalfSide, -kHalfSide, kRaise);
  array.precise.col(3) = centre + Vec3(kHalfSide, -kHalfSide, -kRaise);

  array.coarse.col(0) = Vec3(-0.3, -0.2, -0.1);
  array.coarse.col(1) = Vec3(0.3, -0.2, -0.1);
  array.coarse.col(2) = Vec3(-0.3, 0.2, -0.1);
  array.coarse.col(3) = Vec3(-0.3, -0.2, 0.1);
  return array;
}

ValidationReport validate_array(const HydrophoneArray& array, double frequency, double sound_speed) {
  ValidationReport report;
  auto fail = [&report](std::string message) {
    report.ok = false;
    report.violations.push_back(std::move(message));
  };
  if (!(frequency > 0.0) || !(sound_speed > 0.0)) {
    fail("frequency and sound_speed must be positive");
    return report;
  }

  std::set<int> seen;
  for (int label : array.labels) {
    if (label < 0 || label > 7) fail("channel label " + std::to_string(label) + " outside 0..7");
    if (!seen.insert(label).second) fail("channel label " + std::to_string(label) + " used twice");
  }

  Eigen::Matrix<double, 3, 8> all;
  all << array.precise, array.coarse;
  if (!all.allFinite()) fail("hydrophone position is not finite");
  for (int i = 0; i < 8; ++i) {
    for (int j = i + 1; j < 8; ++j) {
      const double d = (all.col(i) - all.col(j)).norm();
      if (d <= kCoincidenceTolerance) {
        std::ostringstream msg;
        msg << "hydrophones " << i << " and " << j << " coincide (distance " << d << " m)";
        fail(msg.str());
      }
    }
  }

  const double half_wavelength = sound_speed / (2.0 * frequency);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double d = (array.precise.col(i) - array.precise.col(j)).norm();
      if (d > half_wavelength) {
        std::ostringstream msg;
        msg << "precise pair (" << i << "," << j << ") spacing " << d << " m exceeds half wavelength "
            << half_wavelength << " m";
        fail(msg.str());
      }
    }
  }

  constexpr const char* kAxis = "xyz";
  for (int axis = 0; axis < 3; ++axis) {
    bool spans = false;
    for (int i = 0; i < 4 && !spans; ++i) {
      for (int j = i + 1; j < 4 && !spans; ++j) {
        spans = array.coarse(axis, i) * array.coarse(axis, j) < 0.0;
      }
    }
    if (!spans) fail(std::string("coarse quad does not span ") + kAxis[axis] + "-axis");
  }
  return report;
}

std::string OctantId::to_string() const {
  std::string out(3, '+');
  for (int axis = 0; axis < 3; ++axis) {
    if (negative(axis)) out[static_cast<std::size_t>(axis)] = '-';
  }
  return out;
}

double wrap_degrees(double a_minus_b) {
  double d = std::fmod(a_minus_b, 360.0);
  if (d <= -180.0) d += 360.0;
  if (d > 180.0) d -= 360.0;
  return d;
}

}  // namespace pingloc
