#pragma once

// Mono 16-bit PCM RIFF/WAVE reading and writing.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gemstop/error.hpp"

namespace gemstop {

/// Sampled mono audio, amplitudes normalized to [-1, 1].
class Waveform {
 public:
  Waveform(std::vector<double> samples, int sample_rate_hz, std::string source_path = {})
      : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz), source_path_(std::move(source_path)) {
    if (sample_rate_hz_ <= 0) throw Error(ErrorCode::InvalidArgument, "sample rate must be positive");
    if (samples_.empty()) throw Error(ErrorCode::InvalidArgument, "waveform has no samples");
    for (double s : samples_) {
      if (!(s >= -1.0 && s <= 1.0)) throw Error(ErrorCode::InvalidArgument, "sample outside [-1, 1]");
    }
  }

  std::span<const double> samples() const noexcept { return samples_; }
  int sample_rate_hz() const noexcept { return sample_rate_hz_; }
  const std::string& source_path() const noexcept { return source_path_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double duration_s() const noexcept { return static_cast<double>(samples_.size()) / sample_rate_hz_; }

  /// Nearest sample tick to time `t` (seconds), not clamped.
  long long tick(double t) const noexcept { return std::llround(t * sample_rate_hz_); }

  friend bool operator==(const Waveform& a, const Waveform& b) {
    return a.sample_rate_hz_ == b.sample_rate_hz_ && a.samples_ == b.samples_;
  }

 private:
  std::vector<double> samples_;
  int sample_rate_hz_;
  std::string source_path_;
};

/// Rounds to the nearest 16-bit code and back, the value a WAV round trip yields.
inline double quantize16(double x) {
  const double code = std::clamp(std::nearbyint(x * 32768.0), -32768.0, 32767.0);
  return code / 32768.0;
}

namespace detail {

inline std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 | static_cast<std::uint32_t>(b[at + 3]) << 24;
}

inline std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8);
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::equal(tag, tag + 4, b.begin() + static_cast<std::ptrdiff_t>(at));
}

}  // namespace detail

/// Decodes an in-memory WAV image. Only PCM (format 1), mono, 16 bits/sample.
inline Waveform decode_wav(std::span<const std::uint8_t> bytes, std::string source_path = {}) {
  using namespace detail;
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE"))
    throw Error(ErrorCode::NotWav, "missing RIFF/WAVE magic in '" + source_path + "'");

  bool have_fmt = false;
  int rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::size_t size = read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (tag_is(bytes, pos, "fmt ")) {
      if (size < 16 || body + size > bytes.size())
        throw Error(ErrorCode::TruncatedFile, "fmt chunk truncated in '" + source_path + "'");
      const auto format = read_u16(bytes, body);
      const auto channels = read_u16(bytes, body + 2);
      const auto bits = read_u16(bytes, body + 14);
      if (format != 1) throw Error(ErrorCode::UnsupportedFormat, "format code " + std::to_string(format) + " is not PCM");
      if (channels != 1) throw Error(ErrorCode::UnsupportedFormat, std::to_string(channels) + " channels, expected mono");
      if (bits != 16) throw Error(ErrorCode::UnsupportedFormat, std::to_string(bits) + " bits per sample, expected 16");
      rate = static_cast<int>(read_u32(bytes, body + 4));
      if (rate <= 0) throw Error(ErrorCode::UnsupportedFormat, "sample rate is zero");
      have_fmt = true;
    } else if (tag_is(bytes, pos, "data")) {
      if (!have_fmt) throw Error(ErrorCode::NotWav, "data chunk precedes fmt chunk in '" + source_path + "'");
      if (body + size > bytes.size() || size % 2 != 0)
        throw Error(ErrorCode::TruncatedFile, "data chunk declares " + std::to_string(size) + " bytes, " +
                                                  std::to_string(bytes.size() - body) + " available");
      if (size == 0) throw Error(ErrorCode::TruncatedFile, "data chunk is empty");
      std::vector<double> samples(size / 2);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        samples[i] = static_cast<std::int16_t>(read_u16(bytes, body + 2 * i)) / 32768.0;
      }
      return Waveform(std::move(samples), rate, std::move(source_path));
    }
    pos = body + size + (size & 1);
  }
  throw Error(have_fmt ? ErrorCode::TruncatedFile : ErrorCode::NotWav,
              std::string("no ") + (have_fmt ? "data" : "fmt") + " chunk in '" + source_path + "'");
}

inline Waveform load_waveform(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_wav(bytes, path.string());
}

inline std::vector<std::uint8_t> encode_wav(std::span<const double> samples, int sample_rate_hz) {
  using namespace detail;
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put_u32(out, 16);
  put_u16(out, 1);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(sample_rate_hz));
  put_u32(out, static_cast<std::uint32_t>(sample_rate_hz) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32(out, data_bytes);
  for (double s : samples) {
    const auto code = static_cast<std::int16_t>(std::clamp(std::nearbyint(s * 32768.0), -32768.0, 32767.0));
    put_u16(out, static_cast<std::uint16_t>(code));
  }
  return out;
}

inline void write_waveform(const std::filesystem::path& path, const Waveform& wave) {
  const auto bytes = encode_wav(wave.samples(), wave.sample_rate_hz());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to '" + path.string() + "'");
}

}  // namespace gemstop
