#include "pingloc/recording.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include "pingloc/error.hpp"

namespace pingloc {

namespace {

static_assert(std::endian::native == std::endian::little, "recording I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
bool get(std::istream& in, T& value) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&value), sizeof(T)));
}

}  // namespace

void write_recording(const MultiChannelRecording& rec, std::ostream& out) {
  const double rounded = std::round(rec.sample_rate);
  if (rounded != rec.sample_rate || rounded <= 0.0 || rounded > 4294967295.0) {
    throw Error(ErrorCode::kInvalidArgument, "recording sample_rate must be a positive integer number of Hz");
  }
  out.write(kRecordingMagic, 4);
  put<std::uint32_t>(out, kRecordingVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(rec.channel_count()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(rounded));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(rec.length()));

  // Row-major copy gives the frame-interleaved payload in one write.
  const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> frames = rec.samples;
  out.write(reinterpret_cast<const char*>(frames.data()),
            static_cast<std::streamsize>(frames.size() * static_cast<Eigen::Index>(sizeof(float))));
  if (!out) throw Error(ErrorCode::kIo, "failed writing recording");
}

void write_recording(const MultiChannelRecording& rec, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  write_recording(rec, out);
}

MultiChannelRecording read_recording(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kRecordingMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "bad magic: not an OOGW recording");
  }
  std::uint32_t version = 0, channels = 0, rate = 0;
  std::uint64_t frames = 0;
  if (!get(in, version)) throw Error(ErrorCode::kTruncatedPayload, "truncated payload: header");
  if (version != kRecordingVersion) {
    throw Error(ErrorCode::kVersionMismatch, "version mismatch: file version " + std::to_string(version));
  }
  if (!get(in, channels) || !get(in, rate) || !get(in, frames)) {
    throw Error(ErrorCode::kTruncatedPayload, "truncated payload: header");
  }

  const std::uint64_t count = frames * channels;
  if (channels != 0 && count / channels != frames) throw Error(ErrorCode::kTruncatedPayload, "truncated payload: size overflow");
  // Read in bounded chunks so a lying header cannot force a huge allocation.
  std::vector<float> payload;
  constexpr std::uint64_t kChunk = 1U << 20;
  std::uint64_t remaining = count;
  while (remaining > 0) {
    const std::uint64_t n = std::min(remaining, kChunk);
    const std::size_t old = payload.size();
    payload.resize(old + n);
    if (!in.read(reinterpret_cast<char*>(payload.data() + old), static_cast<std::streamsize>(n * sizeof(float)))) {
      throw Error(ErrorCode::kTruncatedPayload, "truncated payload: expected " + std::to_string(count) + " samples");
    }
    remaining -= n;
  }

  MultiChannelRecording rec;
  rec.sample_rate = rate;
  rec.samples = Eigen::Map<const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      payload.data(), static_cast<Eigen::Index>(frames), static_cast<Eigen::Index>(channels));
  return rec;
}

MultiChannelRecording read_recording(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return read_recording(in);
}

}  // namespace pingloc
