#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dff/bispectrum.hpp"

namespace dff {

inline constexpr std::size_t kFeatureDims = 8;

struct FeatureVector {
  double mag_mean = 0.0;
  double mag_var = 0.0;
  double mag_skew = 0.0;
  double mag_kurt = 0.0;
  double phase_mean = 0.0;
  double phase_var = 0.0;
  double phase_skew = 0.0;
  double phase_kurt = 0.0;

  std::array<double, kFeatureDims> to_array() const;
  static FeatureVector from_array(const std::array<double, kFeatureDims>& a);

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

extern const std::array<std::string_view, kFeatureDims> kFeatureNames;

// Population moments; skewness and excess kurtosis are 0 when the second
// central moment is below 1e-12.
struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
};

inline constexpr double kMinVarianceForShape = 1e-12;

Moments population_moments(std::span<const double> values);

// Moments of magnitude and phase over the flattened cells; both spans must
// have the same length >= 2.
FeatureVector features_from_cells(std::span<const double> magnitudes, std::span<const double> phases);

FeatureVector extract_features(const BispectrumGrid& grid);

struct StandardizationParams {
  std::array<double, kFeatureDims> mean{};
  std::array<double, kFeatureDims> stddev{};
};

// Per-dimension mean and population standard deviation. A deviation that is
// negligible next to the mean is stored as exactly 0.
StandardizationParams fit_standardizer(std::span<const FeatureVector> vectors);
FeatureVector apply_standardizer(const StandardizationParams& params, const FeatureVector& v);

struct LabeledFeatures {
  std::string sample_id;
  std::string label;
  FeatureVector features;
};

struct ScatterPoint {
  std::string sample_id;
  std::string label;
  double x = 0.0;
  double y = 0.0;
};

inline constexpr double kScatterFloor = 1e-6;

// Per-axis min-max of mag_mean (x) and phase_mean (y), mapped onto
// [1e-6, 1] so log axes work. A zero-spread axis maps to 1.
std::vector<ScatterPoint> scatter_points(std::span<const LabeledFeatures> samples);
std::string scatter_to_csv(std::span<const ScatterPoint> points);

std::string features_to_csv(std::span<const LabeledFeatures> rows);
std::vector<LabeledFeatures> parse_features_csv(std::string_view text);

}  // namespace dff
