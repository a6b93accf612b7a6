#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "dff/bispectrum.hpp"
#include "dff/error.hpp"
#include "dff/features.hpp"
#include "dff/synthgen.hpp"

using namespace dff;

namespace {

constexpr std::size_t kSeg = 256;
constexpr std::size_t kSegments = 64;

BispectrumGrid analyse(const std::vector<double>& s) {
  return estimate_bispectrum(s, {kSeg, 0.0, Window::Rectangular});
}

double background_median(const BispectrumGrid& g, std::size_t f1, std::size_t f2) {
  std::vector<double> rest;
  for (std::size_t j = 0; j < g.n_bins(); ++j)
    for (std::size_t k = 0; j + k <= kSeg / 2; ++k)
      if (!((j == f1 && k == f2) || (j == f2 && k == f1))) rest.push_back(g.magnitude(j, k));
  std::nth_element(rest.begin(), rest.begin() + rest.size() / 2, rest.end());
  return rest[rest.size() / 2];
}

}  // namespace

TEST_CASE("generators are deterministic per seed") {
  TriadSpec spec;
  CHECK(gen_triad(spec, 4096, kSeg) == gen_triad(spec, 4096, kSeg));
  CHECK(gen_noise(1000, 0.3, 5) == gen_noise(1000, 0.3, 5));
  CHECK_FALSE(gen_noise(1000, 0.3, 5) == gen_noise(1000, 0.3, 6));
  CHECK(counter_uniform(1, 2, 3) == counter_uniform(1, 2, 3));
  CHECK(derive_seed(7, 0) != derive_seed(7, 1));
}

TEST_CASE("noise statistics") {
  CHECK(gen_noise(100, 0.0, 1) == std::vector<double>(100, 0.0));
  auto n = gen_noise(200000, 2.0, 3);
  double sum = 0.0, sq = 0.0;
  for (double x : n) {
    sum += x;
    sq += x * x;
  }
  double mean = sum / n.size();
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(std::sqrt(sq / n.size() - mean * mean) - 2.0) < 0.02);
  for (std::uint64_t i = 0; i < 10000; ++i) {
    double u = counter_uniform(9, 1, i);
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("bins must fit the segment") {
  auto code_of = [](TriadSpec s) {
    try {
      gen_triad(s, 1024, kSeg);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::Io;
  };
  TriadSpec s;
  s.f1_bin = 0;
  CHECK(code_of(s) == Errc::BinOutOfRange);
  s.f1_bin = 100;
  s.f2_bin = 29;
  CHECK(code_of(s) == Errc::BinOutOfRange);
  s.f2_bin = 28;
  CHECK(code_of(s) == Errc::Io);
}

TEST_CASE("coupled triad stands out from the background") {
  TriadSpec spec;
  spec.noise_sigma = 0.01;
  auto g = analyse(gen_triad(spec, kSeg * kSegments, kSeg));
  CHECK(g.segment_count() == kSegments);
  double peak = g.magnitude(spec.f1_bin, spec.f2_bin);
  CHECK(peak > 10.0 * background_median(g, spec.f1_bin, spec.f2_bin));
  // Bins are segment-aligned, so the averaged product keeps its full size A^3 (L/2)^3.
  double full = std::pow(spec.amplitude * kSeg / 2.0, 3);
  CHECK(peak == doctest::Approx(full).epsilon(0.05));
}

TEST_CASE("uncoupled triad averages down") {
  TriadSpec spec;
  spec.coupled = false;
  auto g = analyse(gen_triad(spec, kSeg * kSegments, kSeg));
  double full = std::pow(spec.amplitude * kSeg / 2.0, 3);
  // Random phases leave roughly full / sqrt(segments).
  CHECK(g.magnitude(spec.f1_bin, spec.f2_bin) < 3.0 * full / std::sqrt(double(kSegments)));
}

TEST_CASE("coupled and uncoupled corpora separate in mag_mean and phase_var") {
  // Fixed seeds 1..50 per class at noise 0.1 x amplitude.
  std::vector<FeatureVector> coupled, uncoupled;
  for (std::uint64_t i = 1; i <= 50; ++i) {
    TriadSpec s;
    s.noise_sigma = 0.1 * s.amplitude;
    s.seed = derive_seed(100, i);
    coupled.push_back(extract_features(estimate_bispectrum(gen_triad(s, kSeg * kSegments, kSeg))));
    s.coupled = false;
    s.seed = derive_seed(200, i);
    uncoupled.push_back(extract_features(estimate_bispectrum(gen_triad(s, kSeg * kSegments, kSeg))));
  }
  // Separable by a line in (mag_mean, phase_var): try the perceptron and
  // require it to converge on this fixed data.
  std::vector<std::array<double, 3>> x;
  std::vector<int> y;
  auto add = [&](const std::vector<FeatureVector>& v, int label) {
    for (const auto& f : v) {
      x.push_back({f.mag_mean, f.phase_var, 1.0});
      y.push_back(label);
    }
  };
  add(coupled, 1);
  add(uncoupled, -1);
  // Scale features so the perceptron converges quickly.
  double sx = 0, sy = 0;
  for (const auto& p : x) {
    sx = std::max(sx, std::abs(p[0]));
    sy = std::max(sy, std::abs(p[1]));
  }
  for (auto& p : x) {
    p[0] /= sx;
    p[1] /= sy;
  }
  std::array<double, 3> w{};
  bool separated = false;
  for (int epoch = 0; epoch < 100000 && !separated; ++epoch) {
    separated = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double a = w[0] * x[i][0] + w[1] * x[i][1] + w[2] * x[i][2];
      if (a * y[i] <= 0) {
        separated = false;
        for (int d = 0; d < 3; ++d) w[d] += y[i] * x[i][d];
      }
    }
  }
  CHECK(separated);
}
