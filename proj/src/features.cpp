#include "dff/features.hpp"

#include <algorithm>
#include <cmath>

#include "dff/csv.hpp"
#include "dff/error.hpp"
#include "dff/format.hpp"

namespace dff {

const std::array<std::string_view, kFeatureDims> kFeatureNames = {
    "mag_mean", "mag_var", "mag_skew", "mag_kurt", "phase_mean", "phase_var", "phase_skew", "phase_kurt"};

std::array<double, kFeatureDims> FeatureVector::to_array() const {
  return {mag_mean, mag_var, mag_skew, mag_kurt, phase_mean, phase_var, phase_skew, phase_kurt};
}

FeatureVector FeatureVector::from_array(const std::array<double, kFeatureDims>& a) {
  return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]};
}

Moments population_moments(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::GridTooSmall, "no values");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  Moments m;
  m.mean = sum / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    double d = v - m.mean;
    double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  m.variance = m2;
  if (m2 >= kMinVarianceForShape) {
    m.skewness = m3 / std::pow(m2, 1.5);
    m.kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return m;
}

FeatureVector features_from_cells(std::span<const double> magnitudes, std::span<const double> phases) {
  if (magnitudes.size() != phases.size()) throw Error(Errc::InvalidArgument, "magnitude/phase size mismatch");
  if (magnitudes.size() < 2) throw Error(Errc::GridTooSmall, "need at least 2 cells");
  Moments mag = population_moments(magnitudes);
  Moments ph = population_moments(phases);
  return {mag.mean, mag.variance, mag.skewness, mag.kurtosis, ph.mean, ph.variance, ph.skewness, ph.kurtosis};
}

FeatureVector extract_features(const BispectrumGrid& grid) {
  if (grid.valid_count() < 2) throw Error(Errc::GridTooSmall, "grid has fewer than 2 valid cells");
  auto mags = valid_cells(grid, magnitude_grid(grid));
  auto phases = valid_cells(grid, biphase_grid(grid));
  return features_from_cells(mags, phases);
}

StandardizationParams fit_standardizer(std::span<const FeatureVector> vectors) {
  if (vectors.size() < 2) throw Error(Errc::TooFewVectors, "standardizer needs at least 2 vectors");
  StandardizationParams p;
  const double n = static_cast<double>(vectors.size());
  for (std::size_t d = 0; d < kFeatureDims; ++d) {
    double sum = 0.0;
    for (const auto& v : vectors) sum += v.to_array()[d];
    double mean = sum / n;
    double ss = 0.0;
    for (const auto& v : vectors) {
      double dev = v.to_array()[d] - mean;
      ss += dev * dev;
    }
    double sd = std::sqrt(ss / n);
    if (sd <= 1e-12 * std::max(1.0, std::abs(mean))) sd = 0.0;
    p.mean[d] = mean;
    p.stddev[d] = sd;
  }
  return p;
}

FeatureVector apply_standardizer(const StandardizationParams& params, const FeatureVector& v) {
  auto a = v.to_array();
  for (std::size_t d = 0; d < kFeatureDims; ++d) {
    a[d] = params.stddev[d] > 0.0 ? (a[d] - params.mean[d]) / params.stddev[d] : 0.0;
  }
  return FeatureVector::from_array(a);
}

std::vector<ScatterPoint> scatter_points(std::span<const LabeledFeatures> samples) {
  if (samples.size() < 2) throw Error(Errc::TooFewVectors, "scatter needs at least 2 samples");
  auto axis = [&](auto get) {
    double lo = get(samples.front()), hi = lo;
    for (const auto& s : samples) {
      lo = std::min(lo, get(s));
      hi = std::max(hi, get(s));
    }
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
      out.push_back(hi > lo ? kScatterFloor + (1.0 - kScatterFloor) * (get(s) - lo) / (hi - lo) : 1.0);
    }
    return out;
  };
  auto xs = axis([](const LabeledFeatures& s) { return s.features.mag_mean; });
  auto ys = axis([](const LabeledFeatures& s) { return s.features.phase_mean; });
  std::vector<ScatterPoint> points;
  points.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    points.push_back({samples[i].sample_id, samples[i].label, xs[i], ys[i]});
  }
  return points;
}

std::string scatter_to_csv(std::span<const ScatterPoint> points) {
  std::string out = "sample_id,label,x,y\n";
  for (const auto& p : points) {
    out += csv_field(p.sample_id) + "," + csv_field(p.label) + "," + fmt_real(p.x) + "," + fmt_real(p.y) + "\n";
  }
  return out;
}

std::string features_to_csv(std::span<const LabeledFeatures> rows) {
  std::string out = "sample_id,label";
  for (auto name : kFeatureNames) out += "," + std::string(name);
  out += "\n";
  for (const auto& r : rows) {
    out += csv_field(r.sample_id) + "," + csv_field(r.label);
    for (double v : r.features.to_array()) out += "," + fmt_real(v);
    out += "\n";
  }
  return out;
}

std::vector<LabeledFeatures> parse_features_csv(std::string_view text) {
  auto rows = parse_csv(text);
  CsvRow header = {"sample_id", "label"};
  for (auto name : kFeatureNames) header.emplace_back(name);
  if (rows.empty() || rows.front() != header) throw Error(Errc::MalformedLine, "features CSV: unexpected header");
  std::vector<LabeledFeatures> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != header.size()) {
      throw Error(Errc::MalformedLine, "features CSV row " + std::to_string(i) + ": expected 10 fields");
    }
    std::array<double, kFeatureDims> a{};
    for (std::size_t d = 0; d < kFeatureDims; ++d) {
      try {
        std::size_t used = 0;
        a[d] = std::stod(r[2 + d], &used);
        if (used != r[2 + d].size() || !std::isfinite(a[d])) throw std::invalid_argument(r[2 + d]);
      } catch (const std::exception&) {
        throw Error(Errc::MalformedLine, "features CSV row " + std::to_string(i) + ": bad number '" + r[2 + d] + "'");
      }
    }
    out.push_back({r[0], r[1], FeatureVector::from_array(a)});
  }
  return out;
}

}  // namespace dff
