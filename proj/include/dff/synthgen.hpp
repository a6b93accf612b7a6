#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace dff {

// Three cosines at bins f1, f2 and f1+f2 of an analysis segment. With
// `coupled` the third phase is the sum of the first two in every segment;
// otherwise all three are independent.
struct TriadSpec {
  std::size_t f1_bin = 20;
  std::size_t f2_bin = 33;
  bool coupled = true;
  double amplitude = 0.1;
  double noise_sigma = 0.01;
  std::uint64_t seed = 1;
};

// Counter-based generator: the i-th draw of a stream depends only on
// (seed, stream, i), so output is identical across platforms and threads.
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);
double counter_gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

std::vector<double> gen_noise(std::size_t length, double sigma, std::uint64_t seed);

// Phases are redrawn every segment_len samples; time restarts at each
// segment boundary so segment-aligned analysis sees the drawn phases exactly.
std::vector<double> gen_triad(const TriadSpec& spec, std::size_t length, std::size_t segment_len);

}  // namespace dff
