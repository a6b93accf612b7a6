#include "dff/synthgen.hpp"

#include <cmath>

#include "dff/error.hpp"

namespace dff {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return splitmix(splitmix(seed ^ splitmix(stream)) + index);
}

constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kPhaseStream = 2;

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  // Open interval (0, 1): safe for log().
  return (static_cast<double>(counter_bits(seed, stream, index) >> 11) + 0.5) * 0x1.0p-53;
}

double counter_gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  double u1 = counter_uniform(seed, stream, 2 * index);
  double u2 = counter_uniform(seed, stream, 2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) { return counter_bits(base, 0, index); }

std::vector<double> gen_noise(std::size_t length, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw Error(Errc::InvalidArgument, "sigma must be >= 0");
  std::vector<double> out(length, 0.0);
  if (sigma == 0.0) return out;
  for (std::size_t i = 0; i < length; ++i) out[i] = sigma * counter_gaussian(seed, kNoiseStream, i);
  return out;
}

std::vector<double> gen_triad(const TriadSpec& spec, std::size_t length, std::size_t segment_len) {
  if (segment_len == 0 || length < segment_len) throw Error(Errc::InvalidArgument, "length must be >= segment_len > 0");
  if (spec.f1_bin < 1 || spec.f2_bin < 1 || spec.f1_bin + spec.f2_bin > segment_len / 2) {
    throw Error(Errc::BinOutOfRange, "need f1, f2 >= 1 and f1 + f2 <= " + std::to_string(segment_len / 2));
  }
  if (!(spec.amplitude > 0.0)) throw Error(Errc::InvalidArgument, "amplitude must be positive");

  std::vector<double> out = gen_noise(length, spec.noise_sigma, spec.seed);
  const double w1 = 2.0 * M_PI * static_cast<double>(spec.f1_bin) / static_cast<double>(segment_len);
  const double w2 = 2.0 * M_PI * static_cast<double>(spec.f2_bin) / static_cast<double>(segment_len);
  const double w3 = 2.0 * M_PI * static_cast<double>(spec.f1_bin + spec.f2_bin) / static_cast<double>(segment_len);
  for (std::size_t start = 0, seg = 0; start < length; start += segment_len, ++seg) {
    double p1 = 2.0 * M_PI * counter_uniform(spec.seed, kPhaseStream, 3 * seg);
    double p2 = 2.0 * M_PI * counter_uniform(spec.seed, kPhaseStream, 3 * seg + 1);
    double p3 = spec.coupled ? p1 + p2 : 2.0 * M_PI * counter_uniform(spec.seed, kPhaseStream, 3 * seg + 2);
    for (std::size_t t = 0; t < segment_len && start + t < length; ++t) {
      double tt = static_cast<double>(t);
      out[start + t] += spec.amplitude * (std::cos(w1 * tt + p1) + std::cos(w2 * tt + p2) + std::cos(w3 * tt + p3));
    }
  }
  return out;
}

}  // namespace dff
