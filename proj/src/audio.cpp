#include "dff/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <string>

#include "dff/error.hpp"

namespace dff {

AudioBuffer::AudioBuffer(std::vector<double> samples, int sample_rate_hz)
    : samples_(std::move(samples)), rate_(sample_rate_hz) {
  if (rate_ <= 0) throw Error(Errc::InvalidArgument, "sample rate must be positive");
  for (double s : samples_) {
    if (!std::isfinite(s)) throw Error(Errc::NonFiniteSample, "audio buffer contains NaN or Inf");
  }
}

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t pos() const { return pos_; }

  void need(std::size_t n) const {
    if (remaining() < n) throw Error(Errc::MalformedContainer, "truncated RIFF data");
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = static_cast<std::uint32_t>(bytes_[pos_]) |
                      (static_cast<std::uint32_t>(bytes_[pos_ + 1]) << 8) |
                      (static_cast<std::uint32_t>(bytes_[pos_ + 2]) << 16) |
                      (static_cast<std::uint32_t>(bytes_[pos_ + 3]) << 24);
    pos_ += 4;
    return v;
  }
  bool tag(const char* four) {
    need(4);
    bool ok = std::memcmp(bytes_.data() + pos_, four, 4) == 0;
    pos_ += 4;
    return ok;
  }
  std::string tag_string() {
    need(4);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), 4);
    pos_ += 4;
    return s;
  }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }
  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* four) {
  out.insert(out.end(), four, four + 4);
}

double kaiser(double x, double beta) {
  // x in [-1, 1]
  double t = 1.0 - x * x;
  if (t <= 0.0) return 0.0;
  return std::cyl_bessel_i(0.0, beta * std::sqrt(t)) / std::cyl_bessel_i(0.0, beta);
}

constexpr double kKaiserBeta = 8.6;
constexpr int kTapsAtLowerRate = 64;
constexpr double kPassbandFraction = 0.95;

struct SincKernel {
  double cutoff;      // cycles per source sample, relative to source Nyquist
  double half_width;  // in source samples
  int reach;          // taps on each side

  double operator()(double x) const {
    if (std::abs(x) >= half_width) return 0.0;
    double arg = M_PI * cutoff * x;
    double sinc = (x == 0.0) ? 1.0 : std::sin(arg) / arg;
    return cutoff * sinc * kaiser(x / half_width, kKaiserBeta);
  }
};

}  // namespace

AudioBuffer decode_wav(std::span<const std::uint8_t> bytes, WavInfo* info) {
  ByteReader r(bytes);
  if (bytes.size() < 12 || !r.tag("RIFF")) throw Error(Errc::MalformedContainer, "missing RIFF tag");
  r.u32();  // riff size; ignored, many writers get it wrong
  if (!r.tag("WAVE")) throw Error(Errc::MalformedContainer, "missing WAVE tag");

  bool have_fmt = false;
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
  std::span<const std::uint8_t> data;
  bool have_data = false;

  while (r.remaining() >= 8 && !have_data) {
    std::string id = r.tag_string();
    std::uint32_t size = r.u32();
    if (id == "fmt ") {
      if (size < 16) throw Error(Errc::MalformedContainer, "fmt chunk too small");
      ByteReader f(r.take(size));
      format = f.u16();
      channels = f.u16();
      rate = f.u32();
      f.u32();  // byte rate
      block_align = f.u16();
      bits = f.u16();
      if (format == kFormatExtensible) {
        if (size < 40) throw Error(Errc::MalformedContainer, "extensible fmt chunk too small");
        f.u16();  // cb size
        f.u16();  // valid bits
        f.u32();  // channel mask
        format = f.u16();  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw Error(Errc::MalformedContainer, "data chunk before fmt chunk");
      if (size > r.remaining()) throw Error(Errc::MalformedContainer, "data chunk overruns file");
      data = r.take(size);
      have_data = true;
    } else {
      if (size > r.remaining()) throw Error(Errc::MalformedContainer, "chunk '" + id + "' overruns file");
      r.skip(size);
    }
    if ((size & 1u) && r.remaining() > 0) r.skip(1);
  }
  if (!have_fmt) throw Error(Errc::MalformedContainer, "no fmt chunk");
  if (!have_data) throw Error(Errc::MalformedContainer, "no data chunk");
  if (channels == 0 || rate == 0) throw Error(Errc::MalformedContainer, "zero channels or rate");

  bool is_pcm16 = format == kFormatPcm && bits == 16;
  bool is_float32 = format == kFormatFloat && bits == 32;
  if (!is_pcm16 && !is_float32) {
    throw Error(Errc::UnsupportedFormat, "format " + std::to_string(format) + " with " +
                                             std::to_string(bits) + " bits per sample");
  }
  std::size_t bytes_per_sample = bits / 8;
  if (block_align != channels * bytes_per_sample) {
    throw Error(Errc::MalformedContainer, "block align does not match channels and bit depth");
  }

  std::size_t frames = data.size() / block_align;
  std::vector<double> mono(frames);
  const std::uint8_t* p = data.data();
  for (std::size_t i = 0; i < frames; ++i) {
    if (is_pcm16) {
      // Integer sum keeps the downmix of identical channels exact.
      std::int64_t sum = 0;
      for (std::size_t c = 0; c < channels; ++c, p += 2) {
        sum += static_cast<std::int16_t>(static_cast<std::uint16_t>(p[0] | (p[1] << 8)));
      }
      mono[i] = static_cast<double>(sum) / (32768.0 * channels);
    } else {
      double sum = 0.0;
      for (std::size_t c = 0; c < channels; ++c, p += 4) {
        std::uint32_t u = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                          (static_cast<std::uint32_t>(p[2]) << 16) |
                          (static_cast<std::uint32_t>(p[3]) << 24);
        float f;
        std::memcpy(&f, &u, sizeof f);
        sum += static_cast<double>(f);
      }
      mono[i] = sum / channels;
    }
  }

  if (info) {
    info->channels = channels;
    info->sample_rate_hz = static_cast<int>(rate);
    info->bits_per_sample = bits;
    info->is_float = is_float32;
    info->frames = frames;
  }
  return AudioBuffer(std::move(mono), static_cast<int>(rate));
}

std::int16_t quantize_pcm16(double sample) {
  double clamped = std::clamp(sample, -1.0, 1.0);
  double scaled = std::round(clamped * 32768.0);
  return static_cast<std::int16_t>(std::clamp(scaled, -32767.0, 32767.0));
}

std::vector<std::uint8_t> encode_wav(const AudioBuffer& buffer) {
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(buffer.size() * 2);
  const std::uint32_t rate = static_cast<std::uint32_t>(buffer.sample_rate_hz());
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, rate);
  put_u32(out, rate * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double s : buffer.samples()) put_u16(out, static_cast<std::uint16_t>(quantize_pcm16(s)));
  return out;
}

AudioBuffer resample(const AudioBuffer& buffer, int target_rate_hz) {
  if (target_rate_hz <= 0) throw Error(Errc::InvalidArgument, "target rate must be positive");
  const int source_rate = buffer.sample_rate_hz();
  if (target_rate_hz == source_rate) return buffer;

  const std::int64_t g = std::gcd(source_rate, target_rate_hz);
  const std::int64_t up = target_rate_hz / g;
  const std::int64_t down = source_rate / g;
  const std::int64_t n_in = static_cast<std::int64_t>(buffer.size());
  const std::int64_t n_out = (n_in * target_rate_hz + source_rate / 2) / source_rate;

  SincKernel kernel;
  kernel.cutoff = std::min(1.0, static_cast<double>(target_rate_hz) / source_rate) * kPassbandFraction;
  kernel.half_width = (kTapsAtLowerRate / 2) / std::min(1.0, static_cast<double>(target_rate_hz) / source_rate);
  kernel.reach = static_cast<int>(std::ceil(kernel.half_width));
  const int taps = 2 * kernel.reach;

  // Phase tables when the rational ratio has a manageable numerator.
  constexpr std::int64_t kMaxTablePhases = 4096;
  std::vector<double> table;
  if (up <= kMaxTablePhases) {
    table.resize(static_cast<std::size_t>(up * taps));
    for (std::int64_t p = 0; p < up; ++p) {
      double frac = static_cast<double>(p) / static_cast<double>(up);
      for (int t = 0; t < taps; ++t) {
        int offset = t - kernel.reach + 1;
        table[static_cast<std::size_t>(p * taps + t)] = kernel(offset - frac);
      }
    }
  }

  auto in = buffer.samples();
  std::vector<double> out(static_cast<std::size_t>(n_out));
  for (std::int64_t i = 0; i < n_out; ++i) {
    const std::int64_t pos = i * down;
    const std::int64_t base = pos / up;
    const std::int64_t phase = pos % up;
    double acc = 0.0;
    double wsum = 0.0;
    for (int t = 0; t < taps; ++t) {
      std::int64_t idx = base + t - kernel.reach + 1;
      if (idx < 0 || idx >= n_in) continue;
      double w = table.empty()
                     ? kernel(static_cast<double>(t - kernel.reach + 1) -
                              static_cast<double>(phase) / static_cast<double>(up))
                     : table[static_cast<std::size_t>(phase * taps + t)];
      acc += w * in[static_cast<std::size_t>(idx)];
      wsum += w;
    }
    // Normalizing by the tap sum keeps DC exact, including near the edges.
    out[static_cast<std::size_t>(i)] = wsum != 0.0 ? acc / wsum : 0.0;
  }
  return AudioBuffer(std::move(out), target_rate_hz);
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::Io, "short write to " + path.string());
}

AudioBuffer read_wav_file(const std::filesystem::path& path, WavInfo* info) {
  auto bytes = read_file_bytes(path);
  try {
    return decode_wav(bytes, info);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message());
  }
}

void write_wav_file(const std::filesystem::path& path, const AudioBuffer& buffer) {
  write_file_bytes(path, encode_wav(buffer));
}

}  // namespace dff
