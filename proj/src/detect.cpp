#include "dff/detect.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include <json.hpp>

#include "dff/csv.hpp"
#include "dff/error.hpp"
#include "dff/format.hpp"

namespace dff {

using nlohmann::json;

void DbscanParams::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(Errc::InvalidArgument, "eps must be positive");
  if (min_pts < 1) throw Error(Errc::InvalidArgument, "min_pts must be at least 1");
}

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

std::vector<std::vector<double>> as_points(std::span<const FeatureVector> vectors) {
  std::vector<std::vector<double>> points;
  points.reserve(vectors.size());
  for (const auto& v : vectors) {
    auto a = v.to_array();
    points.emplace_back(a.begin(), a.end());
  }
  return points;
}

constexpr int kUnvisited = -2;

}  // namespace

std::vector<int> dbscan(std::span<const std::vector<double>> points, const DbscanParams& params) {
  params.validate();
  const std::size_t n = points.size();
  for (const auto& p : points) {
    if (p.size() != points.front().size()) throw Error(Errc::InvalidArgument, "points differ in dimension");
    for (double c : p) {
      if (!std::isfinite(c)) throw Error(Errc::NonFiniteSample, "point has a non-finite coordinate");
    }
  }
  const double eps2 = params.eps * params.eps;
  auto neighbors = [&](std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j) {
      if (squared_distance(points[i], points[j]) <= eps2) out.push_back(j);
    }
    return out;
  };

  std::vector<int> labels(n, kUnvisited);
  int next_cluster = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != kUnvisited) continue;
    auto seeds = neighbors(i);
    if (seeds.size() < params.min_pts) {
      labels[i] = kNoise;  // may still become a border point later
      continue;
    }
    const int cluster = next_cluster++;
    labels[i] = cluster;
    std::deque<std::size_t> queue(seeds.begin(), seeds.end());
    while (!queue.empty()) {
      std::size_t q = queue.front();
      queue.pop_front();
      if (labels[q] == kNoise) labels[q] = cluster;
      if (labels[q] != kUnvisited) continue;
      labels[q] = cluster;
      auto reach = neighbors(q);
      if (reach.size() >= params.min_pts) queue.insert(queue.end(), reach.begin(), reach.end());
    }
  }
  return labels;
}

std::vector<int> dbscan(std::span<const FeatureVector> points, const DbscanParams& params) {
  auto p = as_points(points);
  return dbscan(std::span<const std::vector<double>>(p), params);
}

std::vector<double> k_distance_curve(std::span<const FeatureVector> points, std::size_t k) {
  if (k == 0) throw Error(Errc::InvalidArgument, "k must be at least 1");
  if (k >= points.size()) {
    throw Error(Errc::KTooLarge, "k = " + std::to_string(k) + " needs more than " + std::to_string(points.size()) +
                                     " points");
  }
  auto p = as_points(points);
  std::vector<double> curve;
  curve.reserve(p.size());
  std::vector<double> dist;
  for (std::size_t i = 0; i < p.size(); ++i) {
    dist.clear();
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (j != i) dist.push_back(squared_distance(p[i], p[j]));
    }
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1), dist.end());
    curve.push_back(std::sqrt(dist[k - 1]));
  }
  std::sort(curve.begin(), curve.end());
  return curve;
}

std::string k_distance_to_csv(std::span<const double> curve) {
  std::string out = "rank,distance\n";
  for (std::size_t i = 0; i < curve.size(); ++i) out += std::to_string(i) + "," + fmt_real(curve[i]) + "\n";
  return out;
}

std::string_view verdict_name(Verdict v) { return v == Verdict::Real ? "real" : "fake"; }

Verdict parse_verdict(std::string_view s) {
  if (s == "real") return Verdict::Real;
  if (s == "fake") return Verdict::Fake;
  throw Error(Errc::MalformedLine, "label must be real or fake, got '" + std::string(s) + "'");
}

void VoiceProfile::validate() const {
  if (reference.empty()) throw Error(Errc::InvalidArgument, "voice profile has no reference samples");
  std::set<std::string_view> ids;
  for (const auto& r : reference) {
    if (!ids.insert(r.sample_id).second) {
      throw Error(Errc::InvalidArgument, "duplicate reference sample id " + r.sample_id);
    }
  }
}

namespace {

std::vector<FeatureVector> features_of(std::span<const ReferenceSample> samples) {
  std::vector<FeatureVector> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.features);
  return out;
}

}  // namespace

VoiceProfile build_profile(std::string subject_id, std::vector<ReferenceSample> reference,
                           const ClassifyOptions& options, std::optional<std::string> created_at) {
  VoiceProfile p;
  p.subject_id = std::move(subject_id);
  p.reference = std::move(reference);
  p.options = options;
  p.created_at = std::move(created_at);
  p.validate();
  options.dbscan.validate();
  if (options.fit_scope == FitScope::ReferenceOnly) p.standardizer = fit_standardizer(features_of(p.reference));
  return p;
}

DetectionReport classify(const VoiceProfile& profile, std::span<const ReferenceSample> queries,
                         const ClassifyOptions& options) {
  profile.validate();
  options.dbscan.validate();
  if (queries.empty()) throw Error(Errc::EmptyQuerySet, "no query samples");
  if (!(options.real_fraction_threshold >= 0.0 && options.real_fraction_threshold <= 1.0)) {
    throw Error(Errc::InvalidArgument, "real_fraction_threshold must be in [0, 1]");
  }

  // Reference first, then queries; DBSCAN visits in this order.
  std::vector<FeatureVector> all = features_of(profile.reference);
  const std::size_t n_ref = all.size();
  for (const auto& q : queries) all.push_back(q.features);

  StandardizationParams standardizer;
  if (options.fit_scope == FitScope::Union) {
    standardizer = fit_standardizer(all);
  } else if (profile.standardizer) {
    standardizer = *profile.standardizer;
  } else {
    standardizer = fit_standardizer(features_of(profile.reference));
  }
  std::vector<FeatureVector> scaled;
  scaled.reserve(all.size());
  for (const auto& v : all) scaled.push_back(apply_standardizer(standardizer, v));

  const auto labels = dbscan(std::span<const FeatureVector>(scaled), options.dbscan);

  DetectionReport report;
  report.subject_id = profile.subject_id;
  report.options = options;
  int n_clusters = 0;
  for (int l : labels) n_clusters = std::max(n_clusters, l + 1);
  report.clusters.resize(static_cast<std::size_t>(n_clusters));
  for (int c = 0; c < n_clusters; ++c) report.clusters[static_cast<std::size_t>(c)].id = c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == kNoise) continue;
    auto& c = report.clusters[static_cast<std::size_t>(labels[i])];
    (i < n_ref ? c.reference_members : c.query_members)++;
  }
  for (auto& c : report.clusters) {
    double share = static_cast<double>(c.reference_members) / static_cast<double>(c.reference_members + c.query_members);
    c.is_real = share >= options.real_fraction_threshold;
  }
  for (std::size_t q = 0; q < queries.size(); ++q) {
    int label = labels[n_ref + q];
    bool real = label != kNoise && report.clusters[static_cast<std::size_t>(label)].is_real;
    report.queries.push_back(
        {queries[q].sample_id, label, real ? Verdict::Real : Verdict::Fake, queries[q].features, std::nullopt});
  }
  return report;
}

Evaluation evaluate_confusion(const ConfusionMatrix& c) {
  Evaluation e;
  e.confusion = c;
  std::size_t predicted_fake = c.fake_as_fake + c.real_as_fake;
  std::size_t actual_fake = c.fake_as_fake + c.fake_as_real;
  e.precision_undefined = predicted_fake == 0;
  e.recall_undefined = actual_fake == 0;
  e.precision_fake = e.precision_undefined ? 0.0 : static_cast<double>(c.fake_as_fake) / predicted_fake;
  e.recall_fake = e.recall_undefined ? 0.0 : static_cast<double>(c.fake_as_fake) / actual_fake;
  return e;
}

DetectionReport evaluate(DetectionReport report, const GroundTruth& truth) {
  ConfusionMatrix c;
  for (auto& q : report.queries) {
    auto it = truth.find(q.sample_id);
    if (it == truth.end()) throw Error(Errc::MissingGroundTruth, "no ground truth for " + q.sample_id);
    q.actual = it->second;
    bool actual_fake = it->second == Verdict::Fake;
    bool predicted_fake = q.verdict == Verdict::Fake;
    if (actual_fake) {
      (predicted_fake ? c.fake_as_fake : c.fake_as_real)++;
    } else {
      (predicted_fake ? c.real_as_fake : c.real_as_real)++;
    }
  }
  report.evaluation = evaluate_confusion(c);
  return report;
}

GroundTruth parse_ground_truth_csv(std::string_view text) {
  auto rows = parse_csv(text);
  if (rows.empty() || rows.front() != CsvRow{"sample_id", "label"}) {
    throw Error(Errc::MalformedLine, "ground truth CSV: expected header sample_id,label");
  }
  GroundTruth truth;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 2) throw Error(Errc::MalformedLine, "ground truth row " + std::to_string(i) + ": need 2 fields");
    truth[rows[i][0]] = parse_verdict(rows[i][1]);
  }
  return truth;
}

namespace {

constexpr int kFormatVersion = 1;

// Values pass through the 9-significant-digit formatter so the JSON text is
// as stable as the CSV outputs.
double round9(double v) { return std::stod(fmt_real(v)); }

json features_json(const FeatureVector& f) {
  json arr = json::array();
  for (double v : f.to_array()) arr.push_back(round9(v));
  return arr;
}

FeatureVector features_from(const json& j) {
  if (!j.is_array() || j.size() != kFeatureDims) throw Error(Errc::MalformedLine, "features must be 8 numbers");
  std::array<double, kFeatureDims> a{};
  for (std::size_t d = 0; d < kFeatureDims; ++d) a[d] = j.at(d).get<double>();
  return FeatureVector::from_array(a);
}

json options_json(const ClassifyOptions& o) {
  return json{{"eps", round9(o.dbscan.eps)},
              {"min_pts", o.dbscan.min_pts},
              {"real_fraction_threshold", round9(o.real_fraction_threshold)},
              {"fit_scope", o.fit_scope == FitScope::Union ? "union" : "reference"}};
}

ClassifyOptions options_from(const json& j) {
  ClassifyOptions o;
  o.dbscan.eps = j.at("eps").get<double>();
  o.dbscan.min_pts = j.at("min_pts").get<std::size_t>();
  o.real_fraction_threshold = j.at("real_fraction_threshold").get<double>();
  auto scope = j.at("fit_scope").get<std::string>();
  if (scope == "union") {
    o.fit_scope = FitScope::Union;
  } else if (scope == "reference") {
    o.fit_scope = FitScope::ReferenceOnly;
  } else {
    throw Error(Errc::MalformedLine, "unknown fit_scope '" + scope + "'");
  }
  return o;
}

json array_json(const std::array<double, kFeatureDims>& a) {
  json arr = json::array();
  for (double v : a) arr.push_back(round9(v));
  return arr;
}

template <typename F>
auto parse_json_document(std::string_view text, const char* expected_format, F body) {
  try {
    json j = json::parse(text);
    if (j.at("format").get<std::string>() != expected_format) {
      throw Error(Errc::MalformedLine, std::string("not a ") + expected_format + " document");
    }
    if (j.at("version").get<int>() != kFormatVersion) {
      throw Error(Errc::MalformedLine, "unsupported " + std::string(expected_format) + " version");
    }
    return body(j);
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedLine, std::string(expected_format) + ": " + e.what());
  }
}

}  // namespace

std::string profile_to_json(const VoiceProfile& profile) {
  json j;
  j["format"] = "dff-voice-profile";
  j["version"] = kFormatVersion;
  j["subject_id"] = profile.subject_id;
  j["created_at"] = profile.created_at ? json(*profile.created_at) : json(nullptr);
  j["params"] = options_json(profile.options);
  if (profile.standardizer) {
    j["standardizer"] = {{"mean", array_json(profile.standardizer->mean)},
                         {"stddev", array_json(profile.standardizer->stddev)}};
  } else {
    j["standardizer"] = nullptr;
  }
  json refs = json::array();
  for (const auto& r : profile.reference) refs.push_back({{"sample_id", r.sample_id}, {"features", features_json(r.features)}});
  j["reference"] = std::move(refs);
  return j.dump(2) + "\n";
}

VoiceProfile profile_from_json(std::string_view text) {
  return parse_json_document(text, "dff-voice-profile", [](const json& j) {
    VoiceProfile p;
    p.subject_id = j.at("subject_id").get<std::string>();
    if (!j.at("created_at").is_null()) p.created_at = j.at("created_at").get<std::string>();
    p.options = options_from(j.at("params"));
    if (!j.at("standardizer").is_null()) {
      StandardizationParams s;
      auto mean = features_from(j.at("standardizer").at("mean")).to_array();
      auto sd = features_from(j.at("standardizer").at("stddev")).to_array();
      s.mean = mean;
      s.stddev = sd;
      p.standardizer = s;
    }
    for (const auto& r : j.at("reference")) {
      p.reference.push_back({r.at("sample_id").get<std::string>(), features_from(r.at("features"))});
    }
    p.validate();
    return p;
  });
}

std::string report_to_json(const DetectionReport& report) {
  json j;
  j["format"] = "dff-detection-report";
  j["version"] = kFormatVersion;
  j["subject_id"] = report.subject_id;
  j["params"] = options_json(report.options);
  json clusters = json::array();
  for (const auto& c : report.clusters) {
    clusters.push_back({{"id", c.id},
                        {"reference_members", c.reference_members},
                        {"query_members", c.query_members},
                        {"label", c.is_real ? "real" : "fake"}});
  }
  j["clusters"] = std::move(clusters);
  json queries = json::array();
  for (const auto& q : report.queries) {
    queries.push_back({{"sample_id", q.sample_id},
                       {"cluster", q.cluster == kNoise ? json("noise") : json(q.cluster)},
                       {"verdict", verdict_name(q.verdict)},
                       {"actual", q.actual ? json(verdict_name(*q.actual)) : json(nullptr)},
                       {"features", features_json(q.features)}});
  }
  j["queries"] = std::move(queries);
  if (report.evaluation) {
    const auto& e = *report.evaluation;
    j["evaluation"] = {
        {"confusion",
         {{"real", {{"real", e.confusion.real_as_real}, {"fake", e.confusion.real_as_fake}}},
          {"fake", {{"real", e.confusion.fake_as_real}, {"fake", e.confusion.fake_as_fake}}}}},
        {"precision_fake", round9(e.precision_fake)},
        {"recall_fake", round9(e.recall_fake)},
        {"precision_undefined", e.precision_undefined},
        {"recall_undefined", e.recall_undefined}};
  } else {
    j["evaluation"] = nullptr;
  }
  return j.dump(2) + "\n";
}

DetectionReport report_from_json(std::string_view text) {
  return parse_json_document(text, "dff-detection-report", [](const json& j) {
    DetectionReport r;
    r.subject_id = j.at("subject_id").get<std::string>();
    r.options = options_from(j.at("params"));
    for (const auto& c : j.at("clusters")) {
      r.clusters.push_back({c.at("id").get<int>(), c.at("reference_members").get<std::size_t>(),
                            c.at("query_members").get<std::size_t>(), c.at("label").get<std::string>() == "real"});
    }
    for (const auto& q : j.at("queries")) {
      const auto& cl = q.at("cluster");
      int cluster = cl.is_string() ? kNoise : cl.get<int>();
      QueryResult result{q.at("sample_id").get<std::string>(), cluster,
                         parse_verdict(q.at("verdict").get<std::string>()), features_from(q.at("features")),
                         std::nullopt};
      if (!q.at("actual").is_null()) result.actual = parse_verdict(q.at("actual").get<std::string>());
      r.queries.push_back(std::move(result));
    }
    if (!j.at("evaluation").is_null()) {
      const auto& c = j.at("evaluation").at("confusion");
      ConfusionMatrix m;
      m.real_as_real = c.at("real").at("real").get<std::size_t>();
      m.real_as_fake = c.at("real").at("fake").get<std::size_t>();
      m.fake_as_real = c.at("fake").at("real").get<std::size_t>();
      m.fake_as_fake = c.at("fake").at("fake").get<std::size_t>();
      r.evaluation = evaluate_confusion(m);
    }
    return r;
  });
}

std::string report_table(const DetectionReport& report) {
  std::string out = "subject: " + report.subject_id + "  eps=" + fmt_real(report.options.dbscan.eps) +
                    "  min_pts=" + std::to_string(report.options.dbscan.min_pts) +
                    "  threshold=" + fmt_real(report.options.real_fraction_threshold) + "\n";
  std::size_t width = 9;
  for (const auto& q : report.queries) width = std::max(width, q.sample_id.size());
  auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(w, s.size()), ' ');
    return s;
  };
  out += pad("sample_id", width) + "  cluster  verdict\n";
  for (const auto& q : report.queries) {
    out += pad(q.sample_id, width) + "  " + pad(q.cluster == kNoise ? "noise" : std::to_string(q.cluster), 7) + "  " +
           std::string(verdict_name(q.verdict)) + "\n";
  }
  std::size_t n_fake = 0;
  for (const auto& q : report.queries) n_fake += q.verdict == Verdict::Fake;
  out += std::to_string(report.queries.size()) + " queries, " + std::to_string(n_fake) + " flagged fake, " +
         std::to_string(report.clusters.size()) + " clusters\n";
  if (report.evaluation) {
    const auto& e = *report.evaluation;
    const auto& c = e.confusion;
    out += "confusion (rows actual, columns predicted)\n";
    out += "          real  fake\n";
    char line[96];
    std::snprintf(line, sizeof line, "real    %6zu %5zu\n", c.real_as_real, c.real_as_fake);
    out += line;
    std::snprintf(line, sizeof line, "fake    %6zu %5zu\n", c.fake_as_real, c.fake_as_fake);
    out += line;
    out += "precision(fake)=" + fmt_real(e.precision_fake) + (e.precision_undefined ? " (undefined: no fake predictions)" : "") +
           "  recall(fake)=" + fmt_real(e.recall_fake) + (e.recall_undefined ? " (undefined: no actual fakes)" : "") + "\n";
  }
  return out;
}

std::string confusion_to_csv(const ConfusionMatrix& c) {
  return "actual,predicted_real,predicted_fake\n"
         "real," + std::to_string(c.real_as_real) + "," + std::to_string(c.real_as_fake) + "\n"
         "fake," + std::to_string(c.fake_as_real) + "," + std::to_string(c.fake_as_fake) + "\n";
}

}  // namespace dff
