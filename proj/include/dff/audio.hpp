#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace dff {

inline constexpr int kCanonicalRateHz = 22050;

// Mono floating-point signal. Immutable after construction; the constructor
// rejects non-finite samples and non-positive rates.
class AudioBuffer {
 public:
  AudioBuffer(std::vector<double> samples, int sample_rate_hz);

  std::span<const double> samples() const noexcept { return samples_; }
  int sample_rate_hz() const noexcept { return rate_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double duration_s() const noexcept {
    return static_cast<double>(samples_.size()) / static_cast<double>(rate_);
  }

  friend bool operator==(const AudioBuffer&, const AudioBuffer&) = default;

 private:
  std::vector<double> samples_;
  int rate_;
};

// Header fields of a WAV file as found on disk, before downmix.
struct WavInfo {
  int channels = 0;
  int sample_rate_hz = 0;
  int bits_per_sample = 0;
  bool is_float = false;
  std::size_t frames = 0;
};

// Accepts 16-bit PCM and 32-bit IEEE float; multi-channel input is averaged
// per frame. 16-bit samples are divided by 32768.
AudioBuffer decode_wav(std::span<const std::uint8_t> bytes, WavInfo* info = nullptr);

// Mono 16-bit PCM little-endian. Samples are clamped to [-1, 1], scaled by
// 32768, rounded half away from zero and saturated to +-32767, so any buffer
// of exact 16-bit quanta decodes back bit-exactly.
std::vector<std::uint8_t> encode_wav(const AudioBuffer& buffer);

std::int16_t quantize_pcm16(double sample);

// Windowed-sinc (Kaiser, beta 8.6, 64 taps at the lower rate) sample rate
// conversion. Output length is round(n * target / source).
AudioBuffer resample(const AudioBuffer& buffer, int target_rate_hz);

AudioBuffer read_wav_file(const std::filesystem::path& path, WavInfo* info = nullptr);
void write_wav_file(const std::filesystem::path& path, const AudioBuffer& buffer);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace dff
