#include "dff/cli.hpp"

#include <CLI11.hpp>

#include "commands.hpp"
#include "dff/error.hpp"

namespace dff {

namespace {

void add_bispectrum_options(CLI::App* app, BispectrumParams& params, std::string& window) {
  app->add_option("--segment-len", params.segment_len, "Bispectrum segment length (power of two)")
      ->capture_default_str();
  app->add_option("--overlap", params.overlap_fraction, "Segment overlap fraction in [0, 1)")->capture_default_str();
  app->add_option("--window", window, "Segment taper: hann or rectangular")
      ->capture_default_str()
      ->check(CLI::IsMember({"hann", "rectangular"}));
}

template <typename T>
void add_optional(CLI::App* app, const std::string& name, std::optional<T>& target, const std::string& help) {
  app->add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Voice deepfake forensics: corpus preparation and bispectral detection"};
  app.name("dff");
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file (flags win)");

  cli::PrepareConfig prep;
  auto* prepare = app.add_subcommand("prepare", "Build a filtered, normalized, split TTS corpus");
  prepare->add_option("--out", prep.out_dir, "Output directory")->required();
  prepare->add_option("--transcripts", prep.transcripts, "Pipe-separated file of relative.wav|raw transcript");
  prepare->add_option("--input-dir", prep.input_dir, "Directory the transcript paths are relative to");
  prepare->add_option("--recording", prep.recordings, "Long recording to cut (repeatable, pairs with --alignment)");
  prepare->add_option("--alignment", prep.alignments, "Alignment CSV start_s,end_s,text (repeatable)");
  prepare->add_option("--manifest", prep.manifest, "Existing manifest for --split-only");
  prepare->add_flag("--split-only", prep.split_only, "Only split --manifest into train/val");
  prepare->add_option("--lexicon", prep.lexicon, "Replacement lexicon CSV from,to");
  prepare->add_option("--name", prep.dataset_name, "Dataset name for the summary table")->capture_default_str();
  prepare->add_option("--rate", prep.rate_hz, "Canonical sample rate in Hz")->capture_default_str()->check(CLI::PositiveNumber);
  prepare->add_option("--silence-db", prep.silence_dbfs, "Silence threshold in dBFS")->capture_default_str();
  prepare->add_option("--frame-ms", prep.frame_ms, "Silence detection frame in ms")->capture_default_str();
  prepare->add_option("--pad", prep.pad_s, "Tail silence in seconds, 0.3 to 0.5")->capture_default_str();
  prepare->add_option("--min-dur", prep.min_s, "Shortest clip kept, seconds")->capture_default_str();
  prepare->add_option("--max-dur", prep.max_s, "Longest clip kept, seconds")->capture_default_str();
  prepare->add_option("--val-ratio", prep.val_ratio, "Validation fraction")->capture_default_str();
  add_optional(prepare, "--val-floor", prep.val_floor, "Minimum validation size when using the ratio");
  add_optional(prepare, "--val-count", prep.val_count, "Explicit validation size (overrides the ratio)");
  prepare->add_option("--seed", prep.seed, "Shuffle seed")->capture_default_str();
  prepare->add_option("--jobs", prep.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  cli::FeaturesConfig feat;
  std::string feat_window = "hann";
  auto* features = app.add_subcommand("features", "Extract bispectral feature vectors from a WAV directory");
  features->add_option("--input-dir", feat.input_dir, "Directory of .wav files")->required();
  features->add_option("--out", feat.out, "Feature CSV to write")->required();
  features->add_option("--label", feat.label, "Label for every row")->capture_default_str();
  features->add_option("--labels", feat.labels_csv, "CSV sample_id,label overriding --label per file");
  features->add_option("--grid-dir", feat.grid_dir, "Also write each bispectrum grid as CSV here");
  features->add_option("--rate", feat.rate_hz, "Analysis sample rate in Hz")->capture_default_str()->check(CLI::PositiveNumber);
  add_bispectrum_options(features, feat.bispectrum, feat_window);
  features->add_flag("--keep-going", feat.keep_going, "Skip unreadable files instead of aborting");
  features->add_option("--jobs", feat.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  cli::ProfileConfig prof;
  std::string prof_scope = "union";
  auto* profile = app.add_subcommand("profile", "Build a voice profile from known-real feature CSVs");
  profile->add_option("--features", prof.features, "Reference feature CSV (repeatable)")->required();
  profile->add_option("--subject", prof.subject, "Subject identifier")->required();
  profile->add_option("--out", prof.out, "Profile JSON to write")->required();
  profile->add_option("--eps", prof.options.dbscan.eps, "DBSCAN radius in standardized feature space")->required();
  profile->add_option("--min-pts", prof.options.dbscan.min_pts, "DBSCAN density threshold")->capture_default_str();
  profile->add_option("--threshold", prof.options.real_fraction_threshold, "Reference share that makes a cluster real")
      ->capture_default_str();
  profile->add_option("--fit", prof_scope, "Standardizer fit: union or reference")
      ->capture_default_str()
      ->check(CLI::IsMember({"union", "reference"}));
  add_optional(profile, "--created-at", prof.created_at, "Timestamp recorded in the profile");
  profile->add_option("--kdist-out", prof.kdist_out, "Write the reference k-distance curve CSV");
  add_optional(profile, "--kdist-k", prof.kdist_k, "Neighbor rank for --kdist-out (default min-pts - 1)");

  cli::DetectConfig det;
  std::string det_scope;
  auto* detect = app.add_subcommand("detect", "Classify query features against a voice profile");
  detect->add_option("--profile", det.profile, "Profile JSON")->required();
  detect->add_option("--features", det.features, "Query feature CSV (repeatable)")->required();
  detect->add_option("--out", det.out, "Report JSON to write")->required();
  detect->add_option("--truth", det.truth, "Ground truth CSV sample_id,label (real|fake)");
  add_optional(detect, "--eps", det.eps, "Override the profile's eps");
  add_optional(detect, "--min-pts", det.min_pts, "Override the profile's min_pts");
  add_optional(detect, "--threshold", det.threshold, "Override the profile's threshold");
  detect->add_option("--fit", det_scope, "Override the standardizer fit: union or reference")
      ->check(CLI::IsMember({"union", "reference"}));
  detect->add_option("--kdist-out", det.kdist_out, "Write the k-distance curve of reference and queries");
  add_optional(detect, "--kdist-k", det.kdist_k, "Neighbor rank for --kdist-out (default min-pts - 1)");

  cli::ReportConfig rep;
  auto* report = app.add_subcommand("report", "Emit scatter and confusion CSVs from a detection report");
  report->add_option("--report", rep.report, "Report JSON from detect")->required();
  report->add_option("--profile", rep.profile, "Profile JSON; adds reference points to the scatter");
  report->add_option("--out-dir", rep.out_dir, "Directory for scatter.csv and confusion.csv")->required();

  cli::SynthConfig syn;
  auto* synth = app.add_subcommand("synth", "Write a synthetic coupled/uncoupled triad corpus");
  synth->add_option("--out", syn.out_dir, "Output directory")->required();
  synth->add_option("--reference", syn.reference, "Uncoupled reference signals")->capture_default_str();
  synth->add_option("--real-queries", syn.real_queries, "Uncoupled query signals")->capture_default_str();
  synth->add_option("--fake-queries", syn.fake_queries, "Coupled query signals")->capture_default_str();
  synth->add_option("--seed", syn.seed, "Base seed")->capture_default_str();
  synth->add_option("--rate", syn.rate_hz, "Sample rate in Hz")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--segment-len", syn.segment_len, "Phase segment length")->capture_default_str();
  synth->add_option("--segments", syn.segments, "Segments per signal")->capture_default_str();
  synth->add_option("--amplitude", syn.amplitude, "Amplitude of each cosine")->capture_default_str();
  synth->add_option("--noise", syn.noise_sigma, "Gaussian noise standard deviation")->capture_default_str();
  synth->add_option("--f1", syn.f1_bin, "First bin")->capture_default_str();
  synth->add_option("--f2", syn.f2_bin, "Second bin")->capture_default_str();
  synth->add_option("--jobs", syn.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("dff");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*prepare) return cli::cmd_prepare(prep, out, err);
    if (*features) {
      feat.bispectrum.window = parse_window(feat_window);
      return cli::cmd_features(feat, out, err);
    }
    if (*profile) {
      prof.options.fit_scope = prof_scope == "union" ? FitScope::Union : FitScope::ReferenceOnly;
      return cli::cmd_profile(prof, out, err);
    }
    if (*detect) {
      if (!det_scope.empty()) det.fit_scope = det_scope == "union" ? FitScope::Union : FitScope::ReferenceOnly;
      return cli::cmd_detect(det, out, err);
    }
    if (*report) return cli::cmd_report(rep, out, err);
    if (*synth) return cli::cmd_synth(syn, out, err);
  } catch (const Error& e) {
    err << "dff: " << e.what() << "\n";
    return kExitOperational;
  } catch (const std::exception& e) {
    err << "dff: " << e.what() << "\n";
    return kExitOperational;
  }
  return kExitUsage;
}

}  // namespace dff
