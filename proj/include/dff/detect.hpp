#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dff/features.hpp"

namespace dff {

inline constexpr int kNoise = -1;

struct DbscanParams {
  double eps = 1.0;
  std::size_t min_pts = 4;

  void validate() const;
};

// Euclidean DBSCAN. A point is core when at least min_pts points (itself
// included) lie within eps, inclusive. Points are visited in input order,
// cluster ids follow discovery order and a border point belongs to the first
// cluster that reaches it. Returns one label per point, kNoise for noise.
std::vector<int> dbscan(std::span<const std::vector<double>> points, const DbscanParams& params);
std::vector<int> dbscan(std::span<const FeatureVector> points, const DbscanParams& params);

// Distance from each point to its k-th nearest other point, sorted ascending.
std::vector<double> k_distance_curve(std::span<const FeatureVector> points, std::size_t k);
std::string k_distance_to_csv(std::span<const double> curve);

enum class Verdict { Real, Fake };
std::string_view verdict_name(Verdict v);
Verdict parse_verdict(std::string_view s);

enum class FitScope { Union, ReferenceOnly };

struct ReferenceSample {
  std::string sample_id;
  FeatureVector features;
};

struct ClassifyOptions {
  DbscanParams dbscan;
  double real_fraction_threshold = 0.5;
  FitScope fit_scope = FitScope::Union;
};

struct VoiceProfile {
  std::string subject_id;
  std::vector<ReferenceSample> reference;
  std::optional<StandardizationParams> standardizer;
  std::optional<std::string> created_at;
  ClassifyOptions options;

  // Non-empty reference with unique sample ids.
  void validate() const;
};

// Builds a profile from known-real features. With FitScope::ReferenceOnly
// the reference standardizer is fitted and stored.
VoiceProfile build_profile(std::string subject_id, std::vector<ReferenceSample> reference,
                           const ClassifyOptions& options, std::optional<std::string> created_at = std::nullopt);

struct QueryResult {
  std::string sample_id;
  int cluster = kNoise;
  Verdict verdict = Verdict::Fake;
  FeatureVector features;
  std::optional<Verdict> actual;  // set by evaluate()
};

struct ClusterSummary {
  int id = 0;
  std::size_t reference_members = 0;
  std::size_t query_members = 0;
  bool is_real = false;
};

// Rows are the actual class, columns the prediction.
struct ConfusionMatrix {
  std::size_t real_as_real = 0;
  std::size_t real_as_fake = 0;
  std::size_t fake_as_real = 0;
  std::size_t fake_as_fake = 0;

  std::size_t total() const { return real_as_real + real_as_fake + fake_as_real + fake_as_fake; }
};

struct Evaluation {
  ConfusionMatrix confusion;
  double precision_fake = 0.0;
  double recall_fake = 0.0;
  bool precision_undefined = false;  // no fake predictions
  bool recall_undefined = false;     // no actual fakes
};

struct DetectionReport {
  std::string subject_id;
  ClassifyOptions options;
  std::vector<QueryResult> queries;
  std::vector<ClusterSummary> clusters;
  std::optional<Evaluation> evaluation;
};

// Standardizes reference and queries (fit per options.fit_scope), clusters
// the union with DBSCAN and labels each cluster real when its share of
// reference members reaches the threshold. Noise queries are fake.
DetectionReport classify(const VoiceProfile& profile, std::span<const ReferenceSample> queries,
                         const ClassifyOptions& options);

using GroundTruth = std::map<std::string, Verdict, std::less<>>;

Evaluation evaluate_confusion(const ConfusionMatrix& confusion);
DetectionReport evaluate(DetectionReport report, const GroundTruth& truth);

// CSV "sample_id,label" with label real|fake.
GroundTruth parse_ground_truth_csv(std::string_view text);

std::string profile_to_json(const VoiceProfile& profile);
VoiceProfile profile_from_json(std::string_view text);

std::string report_to_json(const DetectionReport& report);
DetectionReport report_from_json(std::string_view text);
std::string report_table(const DetectionReport& report);

// "actual,predicted_real,predicted_fake" with rows real and fake.
std::string confusion_to_csv(const ConfusionMatrix& confusion);

}  // namespace dff
