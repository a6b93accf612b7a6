#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dff/bispectrum.hpp"
#include "dff/detect.hpp"

namespace dff::cli {

struct PrepareConfig {
  std::string out_dir;
  std::string transcripts;  // pipe-separated "relative.wav|raw text"
  std::string input_dir;
  std::vector<std::string> recordings;
  std::vector<std::string> alignments;
  std::string manifest;  // with split_only
  bool split_only = false;
  std::string lexicon;
  std::string dataset_name = "corpus";
  int rate_hz = 22050;
  double silence_dbfs = -40.0;
  double frame_ms = 10.0;
  double pad_s = 0.4;
  double min_s = 0.5;
  double max_s = 30.0;
  double val_ratio = 0.08;
  std::optional<std::size_t> val_floor;
  std::optional<std::size_t> val_count;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

struct FeaturesConfig {
  std::string input_dir;
  std::string out;
  std::string label = "unknown";
  std::string labels_csv;
  std::string grid_dir;
  int rate_hz = 22050;
  BispectrumParams bispectrum;
  bool keep_going = false;
  unsigned jobs = 1;
};

struct ProfileConfig {
  std::vector<std::string> features;
  std::string subject;
  std::string out;
  ClassifyOptions options;
  std::optional<std::string> created_at;
  std::string kdist_out;
  std::optional<std::size_t> kdist_k;
};

struct DetectConfig {
  std::string profile;
  std::vector<std::string> features;
  std::string out;
  std::string truth;
  std::optional<double> eps;
  std::optional<std::size_t> min_pts;
  std::optional<double> threshold;
  std::optional<FitScope> fit_scope;
  std::string kdist_out;
  std::optional<std::size_t> kdist_k;
};

struct ReportConfig {
  std::string report;
  std::string profile;
  std::string out_dir;
};

struct SynthConfig {
  std::string out_dir;
  std::size_t reference = 50;
  std::size_t real_queries = 25;
  std::size_t fake_queries = 25;
  std::uint64_t seed = 7;
  int rate_hz = 22050;
  std::size_t segment_len = 256;
  std::size_t segments = 64;
  double amplitude = 0.1;
  double noise_sigma = 0.01;
  std::size_t f1_bin = 20;
  std::size_t f2_bin = 33;
  unsigned jobs = 1;
};

// Each returns the process exit code; library errors propagate as dff::Error.
int cmd_prepare(const PrepareConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_features(const FeaturesConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_profile(const ProfileConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_detect(const DetectConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_report(const ReportConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace dff::cli
