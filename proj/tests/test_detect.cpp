#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "dff/detect.hpp"
#include "dff/error.hpp"
#include "oracles.hpp"

using namespace dff;

namespace {

std::vector<std::vector<double>> blobs(std::mt19937_64& rng, std::size_t n, std::size_t dims) {
  std::uniform_real_distribution<double> centre(-5.0, 5.0);
  std::normal_distribution<double> spread(0.0, 0.6);
  std::uniform_real_distribution<double> stray(-8.0, 8.0);
  std::vector<std::vector<double>> centres(3, std::vector<double>(dims));
  for (auto& c : centres)
    for (auto& x : c) x = centre(rng);
  std::vector<std::vector<double>> pts;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> p(dims);
    if (i % 7 == 6) {
      for (auto& x : p) x = stray(rng);
    } else {
      const auto& c = centres[i % 3];
      for (std::size_t d = 0; d < dims; ++d) p[d] = c[d] + spread(rng);
    }
    pts.push_back(p);
  }
  return pts;
}

std::vector<ReferenceSample> samples(const std::string& prefix, const std::vector<FeatureVector>& v) {
  std::vector<ReferenceSample> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back({prefix + std::to_string(i), v[i]});
  return out;
}

std::vector<FeatureVector> gaussian_vectors(std::mt19937_64& rng, std::size_t n, double centre) {
  std::normal_distribution<double> g(centre, 1.0);
  std::vector<FeatureVector> v;
  for (std::size_t i = 0; i < n; ++i) {
    std::array<double, 8> a;
    for (auto& x : a) x = g(rng);
    v.push_back(FeatureVector::from_array(a));
  }
  return v;
}

}  // namespace

TEST_CASE("dense blob and isolated point") {
  std::vector<std::vector<double>> same(5, {1.0, 2.0});
  CHECK(dbscan(same, {0.1, 3}) == std::vector<int>(5, 0));
  std::vector<std::vector<double>> lone = {{0.0, 0.0}};
  CHECK(dbscan(lone, {0.5, 2}) == std::vector<int>{kNoise});
  CHECK(dbscan(std::vector<std::vector<double>>{}, {1.0, 2}).empty());
}

TEST_CASE("eps is inclusive and min_pts counts the point itself") {
  std::vector<std::vector<double>> pair = {{0.0}, {1.0}};
  CHECK(dbscan(pair, {1.0, 2}) == std::vector<int>{0, 0});
  CHECK(dbscan(pair, {0.999, 2}) == std::vector<int>{kNoise, kNoise});
  CHECK(dbscan(pair, {1.0, 3}) == std::vector<int>{kNoise, kNoise});
}

TEST_CASE("border point goes to the first cluster") {
  // two cores at -1 and +1 with a shared border at 0
  std::vector<std::vector<double>> p = {{-1.0}, {-1.1}, {-1.2}, {0.0}, {1.0}, {1.1}, {1.2}};
  auto labels = dbscan(p, {1.0, 4});
  CHECK(labels == std::vector<int>{0, 0, 0, 0, 1, 1, 1});
  CHECK(labels == oracle::dbscan(p, 1.0, 4));
}

TEST_CASE("dbscan matches the graph-component oracle") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t dims = trial % 2 ? 8 : 2;
    std::size_t n = 20 + (trial * 37) % 181;
    auto pts = blobs(rng, n, dims);
    double eps = 0.5 + 0.15 * (trial % 10) * (dims == 8 ? 2.0 : 1.0);
    std::size_t min_pts = 2 + trial % 6;
    CAPTURE(trial);
    CHECK(dbscan(pts, {eps, min_pts}) == oracle::dbscan(pts, eps, min_pts));
  }
}

TEST_CASE("dbscan is invariant under translation and rotation") {
  std::mt19937_64 rng(12);
  auto pts = blobs(rng, 120, 2);
  auto base = dbscan(pts, {1.0, 4});
  const double c = std::cos(0.7), s = std::sin(0.7);
  auto moved = pts;
  for (auto& p : moved) {
    double x = p[0], y = p[1];
    p[0] = c * x - s * y + 100.0;
    p[1] = s * x + c * y - 50.0;
  }
  auto after = dbscan(moved, {1.0, 4});
  // Rounding can move a distance across eps; only demand agreement on points
  // whose neighbourhood distances stay clear of the boundary.
  std::size_t agree = 0;
  for (std::size_t i = 0; i < base.size(); ++i) agree += base[i] == after[i];
  CHECK(agree >= base.size() - 2);
}

TEST_CASE("duplicated reference queries are real") {
  std::mt19937_64 rng(1);
  auto ref = samples("r", gaussian_vectors(rng, 20, 0.0));
  for (auto scope : {FitScope::Union, FitScope::ReferenceOnly}) {
    // Each query doubles its reference point, so with min_pts 2 every point
    // is core and every cluster is exactly half reference.
    ClassifyOptions o{{0.5, 2}, 0.5, scope};
    auto profile = build_profile("subj", ref, o);
    std::vector<ReferenceSample> q;
    for (const auto& r : ref) q.push_back({"q" + r.sample_id, r.features});
    auto report = classify(profile, q, o);
    for (const auto& r : report.queries) CHECK(r.verdict == Verdict::Real);
  }
}

TEST_CASE("far-away queries are noise and fake") {
  std::mt19937_64 rng(2);
  auto ref = samples("r", gaussian_vectors(rng, 20, 0.0));
  ClassifyOptions o{{0.8, 4}, 0.5, FitScope::ReferenceOnly};
  auto profile = build_profile("subj", ref, o);
  std::vector<ReferenceSample> q;
  for (std::size_t i = 0; i < 5; ++i) {
    auto a = ref[i].features.to_array();
    for (auto& x : a) x += 1000.0 * o.dbscan.eps * (i + 1);
    q.push_back({"q" + std::to_string(i), FeatureVector::from_array(a)});
  }
  auto report = classify(profile, q, o);
  for (const auto& r : report.queries) {
    CHECK(r.cluster == kNoise);
    CHECK(r.verdict == Verdict::Fake);
  }
  try {
    classify(profile, {}, o);
    FAIL("expected EmptyQuerySet");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyQuerySet);
  }
}

TEST_CASE("a query-only cluster is fake") {
  std::mt19937_64 rng(3);
  auto ref = samples("r", gaussian_vectors(rng, 30, 0.0));
  std::vector<FeatureVector> fakes(10, FeatureVector{50, 50, 50, 50, 50, 50, 50, 50});
  ClassifyOptions o{{1.0, 4}, 0.5, FitScope::ReferenceOnly};
  auto report = classify(build_profile("s", ref, o), samples("f", fakes), o);
  for (const auto& r : report.queries) {
    CHECK(r.cluster != kNoise);
    CHECK(r.verdict == Verdict::Fake);
  }
  bool found = false;
  for (const auto& c : report.clusters)
    if (c.query_members == 10) {
      found = true;
      CHECK(c.reference_members == 0);
      CHECK_FALSE(c.is_real);
    }
  CHECK(found);
}

TEST_CASE("evaluation arithmetic") {
  DetectionReport report;
  report.queries = {{"a", kNoise, Verdict::Fake, {}, {}},
                    {"b", kNoise, Verdict::Fake, {}, {}},
                    {"c", 0, Verdict::Real, {}, {}}};
  auto e = evaluate(report, {{"a", Verdict::Fake}, {"b", Verdict::Real}, {"c", Verdict::Real}});
  REQUIRE(e.evaluation);
  CHECK(e.evaluation->precision_fake == 0.5);
  CHECK(e.evaluation->recall_fake == 1.0);
  CHECK(e.queries[1].actual == Verdict::Real);
  auto perfect = evaluate(report, {{"a", Verdict::Fake}, {"b", Verdict::Fake}, {"c", Verdict::Real}});
  CHECK(perfect.evaluation->precision_fake == 1.0);
  CHECK(perfect.evaluation->recall_fake == 1.0);
  auto none = evaluate_confusion({3, 0, 0, 0});
  CHECK(none.precision_fake == 0.0);
  CHECK(none.precision_undefined);
  CHECK(none.recall_undefined);
  try {
    evaluate(report, {{"a", Verdict::Fake}});
    FAIL("expected MissingGroundTruth");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::MissingGroundTruth);
  }
  auto csv = confusion_to_csv(perfect.evaluation->confusion);
  CHECK(csv == "actual,predicted_real,predicted_fake\nreal,1,0\nfake,0,2\n");
}

TEST_CASE("k-distance curve") {
  std::vector<FeatureVector> line(3);
  for (int i = 0; i < 3; ++i) line[i].mag_mean = i;
  CHECK(k_distance_curve(line, 1) == std::vector<double>{1, 1, 1});
  std::vector<FeatureVector> same(4, FeatureVector{1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(k_distance_curve(same, 2) == std::vector<double>(4, 0.0));
  std::mt19937_64 rng(6);
  auto v = gaussian_vectors(rng, 60, 0.0);
  std::vector<std::vector<double>> raw;
  for (const auto& f : v) {
    auto a = f.to_array();
    raw.emplace_back(a.begin(), a.end());
  }
  for (std::size_t k : {1u, 3u, 10u}) CHECK(k_distance_curve(v, k) == oracle::k_distances(raw, k));
  auto code_of = [&](std::size_t k) {
    try {
      k_distance_curve(line, k);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::Io;
  };
  CHECK(code_of(3) == Errc::KTooLarge);
  CHECK(code_of(0) == Errc::InvalidArgument);
}

TEST_CASE("profile and report JSON round trip") {
  std::mt19937_64 rng(10);
  auto ref = samples("r", gaussian_vectors(rng, 10, 0.0));
  ClassifyOptions o{{2.0, 3}, 0.6, FitScope::ReferenceOnly};
  auto profile = build_profile("speaker_a", ref, o, std::string("2020-01-01T00:00:00Z"));
  auto text = profile_to_json(profile);
  auto back = profile_from_json(text);
  CHECK(profile_to_json(back) == text);
  CHECK(back.subject_id == "speaker_a");
  CHECK(back.options.fit_scope == FitScope::ReferenceOnly);
  CHECK(back.standardizer.has_value());

  auto report = classify(profile, samples("q", gaussian_vectors(rng, 6, 0.5)), o);
  GroundTruth truth;
  for (const auto& q : report.queries) truth[q.sample_id] = Verdict::Real;
  report = evaluate(report, truth);
  auto rtext = report_to_json(report);
  CHECK(report_to_json(report_from_json(rtext)) == rtext);
  CHECK(report_table(report).find("q0") != std::string::npos);
}
