#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "dff/audio.hpp"
#include "dff/cli.hpp"
#include "dff/corpus.hpp"
#include "dff/csv.hpp"
#include "dff/error.hpp"
#include "dff/features.hpp"
#include "dff/format.hpp"
#include "dff/synthgen.hpp"
#include "parallel.hpp"

namespace fs = std::filesystem;

namespace dff::cli {

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::Io, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(Errc::Io, "short write to " + path.string());
}

std::string minutes(double seconds) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f min", seconds / 60.0);
  return buf;
}

void print_split_summary(std::ostream& out, const std::string& name, const TrainValSplit& split,
                         bool durations_known) {
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %-10s %14s %14s %14s\n", "Dataset", "", "Train", "Validation", "Total");
  out << line;
  auto dur = [&](const CorpusManifest& m) { return durations_known ? minutes(m.total_duration_s()) : std::string("-"); };
  std::snprintf(line, sizeof line, "%-12s %-10s %14s %14s %14s\n", name.c_str(), "Duration", dur(split.train).c_str(),
                dur(split.val).c_str(),
                durations_known ? minutes(split.train.total_duration_s() + split.val.total_duration_s()).c_str() : "-");
  out << line;
  std::snprintf(line, sizeof line, "%-12s %-10s %14zu %14zu %14zu\n", "", "# Samples", split.train.size(),
                split.val.size(), split.train.size() + split.val.size());
  out << line;
}

SplitOptions split_options(const PrepareConfig& cfg) {
  SplitOptions s;
  s.val_ratio = cfg.val_ratio;
  s.val_floor = cfg.val_floor;
  s.explicit_val_count = cfg.val_count;
  s.seed = cfg.seed;
  return s;
}

void write_split(const fs::path& out_dir, const TrainValSplit& split) {
  write_text(out_dir / "train.csv", write_manifest(split.train));
  write_text(out_dir / "val.csv", write_manifest(split.val));
}

// "a/b/clip.wav" -> "a_b_clip"
std::string flat_stem(const std::string& relative) {
  fs::path p(relative);
  std::string s = (p.parent_path() / p.stem()).generic_string();
  std::replace(s.begin(), s.end(), '/', '_');
  return s;
}

struct PrepItem {
  std::string out_path;  // relative to out_dir
  std::string transcript;
  fs::path source;                   // transcripts mode
  std::optional<AudioBuffer> audio;  // alignment mode
};

struct PrepResult {
  std::optional<CorpusEntry> entry;
  std::string dropped_reason;
};

std::vector<fs::path> list_wavs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(Errc::Io, "not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".wav") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  return files;
}

std::vector<ReferenceSample> load_samples(const std::vector<std::string>& csv_paths) {
  std::vector<ReferenceSample> out;
  for (const auto& path : csv_paths) {
    for (auto& row : parse_features_csv(read_text_file(path))) out.push_back({row.sample_id, row.features});
  }
  return out;
}

std::vector<FeatureVector> standardized(std::span<const FeatureVector> vectors) {
  auto params = fit_standardizer(vectors);
  std::vector<FeatureVector> out;
  for (const auto& v : vectors) out.push_back(apply_standardizer(params, v));
  return out;
}

}  // namespace

int cmd_prepare(const PrepareConfig& cfg, std::ostream& out, std::ostream& err) {
  const fs::path out_dir(cfg.out_dir);
  const SplitOptions split_opts = split_options(cfg);

  if (cfg.split_only) {
    if (cfg.manifest.empty()) throw Error(Errc::InvalidArgument, "--split-only needs --manifest");
    CorpusManifest m = parse_manifest(read_text_file(cfg.manifest));
    m.validate();
    bool durations = !cfg.input_dir.empty();
    if (durations) fill_durations(m, cfg.input_dir);
    auto split = split_train_val(m, split_opts);
    fs::create_directories(out_dir);
    write_split(out_dir, split);
    print_split_summary(out, cfg.dataset_name, split, durations);
    return kExitOk;
  }

  const Lexicon lexicon = cfg.lexicon.empty() ? Lexicon{} : parse_lexicon_csv(read_text_file(cfg.lexicon));
  std::vector<PrepItem> items;
  std::vector<std::string> warnings;

  if (!cfg.transcripts.empty()) {
    if (cfg.input_dir.empty()) throw Error(Errc::InvalidArgument, "--transcripts needs --input-dir");
    CorpusManifest raw = parse_manifest(read_text_file(cfg.transcripts));
    for (const auto& e : raw.entries) {
      std::vector<std::string> w;
      PrepItem item;
      item.out_path = "wavs/" + flat_stem(e.audio_path) + ".wav";
      item.transcript = normalize_text(e.transcript, lexicon, &w);
      item.source = fs::path(cfg.input_dir) / e.audio_path;
      for (auto& msg : w) warnings.push_back(e.audio_path + ": " + msg);
      items.push_back(std::move(item));
    }
  }
  if (cfg.recordings.size() != cfg.alignments.size()) {
    throw Error(Errc::InvalidArgument, "every --recording needs a matching --alignment");
  }
  for (std::size_t r = 0; r < cfg.recordings.size(); ++r) {
    AudioBuffer rec = resample(read_wav_file(cfg.recordings[r]), cfg.rate_hz);
    std::vector<AlignmentSpan> spans;
    try {
      spans = parse_alignment_csv(read_text_file(cfg.alignments[r]));
    } catch (const Error& e) {
      throw Error(e.code(), cfg.alignments[r] + ": " + e.message());
    }
    auto segments = cut_by_alignment(rec, spans, "wavs/" + fs::path(cfg.recordings[r]).stem().string(), lexicon);
    for (auto& s : segments) {
      PrepItem item;
      item.out_path = s.entry.audio_path;
      item.transcript = s.entry.transcript;
      item.audio = std::move(s.audio);
      items.push_back(std::move(item));
    }
  }
  if (items.empty()) throw Error(Errc::EmptyManifest, "no input: pass --transcripts/--input-dir or --recording/--alignment");
  {
    std::set<std::string> names;
    for (const auto& it : items) {
      if (!names.insert(it.out_path).second) throw Error(Errc::MalformedLine, "two inputs map to " + it.out_path);
    }
  }
  for (const auto& w : warnings) err << "warning: " << w << "\n";

  std::vector<PrepResult> results(items.size());
  parallel_for(items.size(), cfg.jobs, [&](std::size_t i) {
    const PrepItem& item = items[i];
    PrepResult& res = results[i];
    AudioBuffer audio = item.audio ? *item.audio : resample(read_wav_file(item.source), cfg.rate_hz);
    if (item.transcript.empty()) {
      res.dropped_reason = "empty transcript";
      return;
    }
    try {
      audio = trim_silence(audio, cfg.silence_dbfs, cfg.frame_ms);
    } catch (const Error& e) {
      if (e.code() != Errc::AllSilent) throw;
      res.dropped_reason = "silent";
      return;
    }
    audio = pad_tail_silence(audio, cfg.pad_s);
    CorpusEntry entry{item.out_path, item.transcript, audio.duration_s()};
    if (entry.duration_s >= cfg.min_s && entry.duration_s <= cfg.max_s) {
      fs::create_directories((out_dir / item.out_path).parent_path());
      write_wav_file(out_dir / item.out_path, audio);
    }
    res.entry = std::move(entry);
  });

  CorpusManifest all;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].entry) {
      all.entries.push_back(*results[i].entry);
    } else {
      ++skipped;
      err << "dropped " << items[i].out_path << ": " << results[i].dropped_reason << "\n";
    }
  }
  auto filtered = filter_by_duration(all, cfg.min_s, cfg.max_s);
  filtered.kept.validate();
  if (filtered.kept.empty()) throw Error(Errc::EmptyManifest, "every clip was dropped");
  auto split = split_train_val(filtered.kept, split_opts);

  write_text(out_dir / "metadata.csv", write_manifest(filtered.kept));
  write_split(out_dir, split);
  print_split_summary(out, cfg.dataset_name, split, true);
  out << "dropped: " << filtered.dropped.size() << " outside [" << fmt_real(cfg.min_s) << " s, " << fmt_real(cfg.max_s)
      << " s], " << skipped << " silent or empty\n";
  return kExitOk;
}

int cmd_features(const FeaturesConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.bispectrum.validate();
  auto files = list_wavs(cfg.input_dir);
  if (files.empty()) throw Error(Errc::EmptyQuerySet, "no .wav files in " + cfg.input_dir);

  std::map<std::string, std::string> labels;
  if (!cfg.labels_csv.empty()) {
    auto rows = parse_csv(read_text_file(cfg.labels_csv));
    if (rows.empty() || rows.front() != CsvRow{"sample_id", "label"}) {
      throw Error(Errc::MalformedLine, cfg.labels_csv + ": expected header sample_id,label");
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].size() != 2) throw Error(Errc::MalformedLine, cfg.labels_csv + ": row " + std::to_string(i));
      labels[rows[i][0]] = rows[i][1];
    }
  }
  if (!cfg.grid_dir.empty()) fs::create_directories(cfg.grid_dir);

  std::vector<std::optional<LabeledFeatures>> rows(files.size());
  std::vector<std::string> failures(files.size());
  parallel_for(files.size(), cfg.jobs, [&](std::size_t i) {
    const std::string id = files[i].stem().string();
    try {
      AudioBuffer audio = resample(read_wav_file(files[i]), cfg.rate_hz);
      auto grid = estimate_bispectrum(audio.samples(), cfg.bispectrum);
      if (!cfg.grid_dir.empty()) write_text(fs::path(cfg.grid_dir) / (id + ".csv"), grid_to_csv(grid));
      auto it = labels.find(id);
      rows[i] = LabeledFeatures{id, it != labels.end() ? it->second : cfg.label, extract_features(grid)};
    } catch (const Error& e) {
      failures[i] = files[i].string() + ": " + e.what();
    }
  });

  std::vector<LabeledFeatures> ok;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (rows[i]) {
      ok.push_back(*rows[i]);
    } else {
      ++failed;
      err << "error: " << failures[i] << "\n";
    }
  }
  if (failed > 0 && !cfg.keep_going) {
    err << failed << " file(s) failed; rerun with --keep-going to skip them\n";
    return kExitOperational;
  }
  if (ok.empty()) throw Error(Errc::EmptyQuerySet, "no file produced features");
  write_text(cfg.out, features_to_csv(ok));
  out << "wrote " << ok.size() << " feature rows to " << cfg.out;
  if (failed > 0) out << " (" << failed << " skipped)";
  out << "\n";
  return kExitOk;
}

int cmd_profile(const ProfileConfig& cfg, std::ostream& out, std::ostream&) {
  auto reference = load_samples(cfg.features);
  auto profile = build_profile(cfg.subject, std::move(reference), cfg.options, cfg.created_at);
  write_text(cfg.out, profile_to_json(profile));
  if (!cfg.kdist_out.empty()) {
    std::vector<FeatureVector> vs;
    for (const auto& r : profile.reference) vs.push_back(r.features);
    std::size_t k = cfg.kdist_k.value_or(std::max<std::size_t>(1, cfg.options.dbscan.min_pts - 1));
    write_text(cfg.kdist_out, k_distance_to_csv(k_distance_curve(standardized(vs), k)));
  }
  out << "profile '" << profile.subject_id << "': " << profile.reference.size() << " reference samples -> " << cfg.out
      << "\n";
  return kExitOk;
}

int cmd_detect(const DetectConfig& cfg, std::ostream& out, std::ostream&) {
  VoiceProfile profile = profile_from_json(read_text_file(cfg.profile));
  auto queries = load_samples(cfg.features);
  ClassifyOptions options = profile.options;
  if (cfg.eps) options.dbscan.eps = *cfg.eps;
  if (cfg.min_pts) options.dbscan.min_pts = *cfg.min_pts;
  if (cfg.threshold) options.real_fraction_threshold = *cfg.threshold;
  if (cfg.fit_scope) options.fit_scope = *cfg.fit_scope;

  DetectionReport report = classify(profile, queries, options);
  if (!cfg.truth.empty()) report = evaluate(std::move(report), parse_ground_truth_csv(read_text_file(cfg.truth)));
  write_text(cfg.out, report_to_json(report));
  if (!cfg.kdist_out.empty()) {
    std::vector<FeatureVector> vs;
    for (const auto& r : profile.reference) vs.push_back(r.features);
    for (const auto& q : queries) vs.push_back(q.features);
    std::size_t k = cfg.kdist_k.value_or(std::max<std::size_t>(1, options.dbscan.min_pts - 1));
    write_text(cfg.kdist_out, k_distance_to_csv(k_distance_curve(standardized(vs), k)));
  }
  out << report_table(report);
  return kExitOk;
}

int cmd_report(const ReportConfig& cfg, std::ostream& out, std::ostream&) {
  DetectionReport report = report_from_json(read_text_file(cfg.report));
  std::vector<LabeledFeatures> samples;
  if (!cfg.profile.empty()) {
    for (const auto& r : profile_from_json(read_text_file(cfg.profile)).reference) {
      samples.push_back({r.sample_id, "reference", r.features});
    }
  }
  for (const auto& q : report.queries) {
    std::string label = q.actual ? std::string(verdict_name(*q.actual))
                                 : "predicted_" + std::string(verdict_name(q.verdict));
    samples.push_back({q.sample_id, label, q.features});
  }
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_text(dir / "scatter.csv", scatter_to_csv(scatter_points(samples)));
  out << "wrote " << (dir / "scatter.csv").string() << "\n";
  if (report.evaluation) {
    write_text(dir / "confusion.csv", confusion_to_csv(report.evaluation->confusion));
    out << "wrote " << (dir / "confusion.csv").string() << "\n";
  } else {
    out << "confusion matrix omitted: the detection report has no ground truth (run detect with --truth)\n";
  }
  return kExitOk;
}

int cmd_synth(const SynthConfig& cfg, std::ostream& out, std::ostream&) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir / "reference");
  fs::create_directories(dir / "queries");

  struct Job {
    fs::path path;
    std::string id;
    bool coupled;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  char name[32];
  for (std::size_t i = 0; i < cfg.reference; ++i) {
    std::snprintf(name, sizeof name, "ref_%04zu", i + 1);
    jobs.push_back({dir / "reference" / (std::string(name) + ".wav"), name, false, derive_seed(cfg.seed, i)});
  }
  const std::size_t n_queries = cfg.real_queries + cfg.fake_queries;
  for (std::size_t i = 0; i < n_queries; ++i) {
    std::snprintf(name, sizeof name, "query_%04zu", i + 1);
    jobs.push_back({dir / "queries" / (std::string(name) + ".wav"), name, i >= cfg.real_queries,
                    derive_seed(cfg.seed, 1'000'000 + i)});
  }

  const std::size_t length = cfg.segments * cfg.segment_len;
  parallel_for(jobs.size(), cfg.jobs, [&](std::size_t i) {
    TriadSpec spec{cfg.f1_bin, cfg.f2_bin, jobs[i].coupled, cfg.amplitude, cfg.noise_sigma, jobs[i].seed};
    write_wav_file(jobs[i].path, AudioBuffer(gen_triad(spec, length, cfg.segment_len), cfg.rate_hz));
  });

  std::string truth = "sample_id,label\n";
  for (const auto& j : jobs) truth += j.id + "," + (j.coupled ? "fake" : "real") + "\n";
  write_text(dir / "truth.csv", truth);
  out << "wrote " << cfg.reference << " reference and " << n_queries << " query signals to " << dir.string() << "\n";
  return kExitOk;
}

}  // namespace dff::cli
