#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include <Eigen/Core>

#include "pingloc/error.hpp"

namespace pingloc {

/// Synchronised multichannel samples; column c holds channel c.
struct MultiChannelRecording {
  double sample_rate = 0.0;
  Eigen::MatrixXf samples;

  int channel_count() const { return static_cast<int>(samples.cols()); }
  Eigen::Index length() const { return samples.rows(); }
  double duration() const { return sample_rate > 0.0 ? static_cast<double>(length()) / sample_rate : 0.0; }
  Eigen::VectorXd channel(int c) const { return samples.col(c).cast<double>(); }

  friend bool operator==(const MultiChannelRecording& a, const MultiChannelRecording& b) {
    return a.sample_rate == b.sample_rate && a.samples.rows() == b.samples.rows() &&
           a.samples.cols() == b.samples.cols() && a.samples == b.samples;
  }
};

inline constexpr char kRecordingMagic[4] = {'O', 'O', 'G', 'W'};
inline constexpr std::uint32_t kRecordingVersion = 1;

// Little-endian layout: magic, u32 version, u32 channel_count, u32 sample_rate_hz,
// u64 samples_per_channel, then float32 samples interleaved frame by frame.
void write_recording(const MultiChannelRecording& recording, std::ostream& out);
void write_recording(const MultiChannelRecording& recording, const std::filesystem::path& path);
MultiChannelRecording read_recording(std::istream& in);
MultiChannelRecording read_recording(const std::filesystem::path& path);

}  // namespace pingloc
