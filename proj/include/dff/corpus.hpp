#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dff/audio.hpp"
#include "dff/text_norm.hpp"

namespace dff {

struct CorpusEntry {
  std::string audio_path;
  std::string transcript;
  double duration_s = 0.0;

  friend bool operator==(const CorpusEntry&, const CorpusEntry&) = default;
};

// Ordered entries; audio paths are unique.
struct CorpusManifest {
  std::vector<CorpusEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
  bool empty() const noexcept { return entries.empty(); }
  double total_duration_s() const;

  // Throws MalformedLine on duplicate paths, non-charset transcripts or bad
  // durations.
  void validate() const;

  friend bool operator==(const CorpusManifest&, const CorpusManifest&) = default;
};

struct AlignmentSpan {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string text;
};

// Frames are frame_ms long (the last one may be shorter). Leading and trailing
// frames whose RMS level is below threshold_dbfs are dropped.
AudioBuffer trim_silence(const AudioBuffer& buffer, double threshold_dbfs = -40.0, double frame_ms = 10.0);

inline constexpr double kMinPadS = 0.3;
inline constexpr double kMaxPadS = 0.5;

AudioBuffer pad_tail_silence(const AudioBuffer& buffer, double pad_s = 0.4);

struct Segment {
  AudioBuffer audio;
  CorpusEntry entry;
};

// One segment per span, named "<stem>_NNNN.wav" (1-based). Transcripts are
// normalized with `lexicon`.
std::vector<Segment> cut_by_alignment(const AudioBuffer& buffer, const std::vector<AlignmentSpan>& spans,
                                      const std::string& stem, const Lexicon& lexicon = {});

struct DurationSplit {
  CorpusManifest kept;
  CorpusManifest dropped;
};

// Inclusive on both ends.
DurationSplit filter_by_duration(const CorpusManifest& manifest, double min_s = 0.5, double max_s = 30.0);

struct SplitOptions {
  double val_ratio = 0.08;
  std::optional<std::size_t> val_floor;
  std::optional<std::size_t> explicit_val_count;
  std::uint64_t seed = 1;
};

struct TrainValSplit {
  CorpusManifest train;
  CorpusManifest val;
};

std::size_t validation_size(std::size_t n, const SplitOptions& options);

// Seeded Fisher-Yates shuffle; the first validation_size() shuffled entries
// form the validation set. Both halves keep the input order.
TrainValSplit split_train_val(const CorpusManifest& manifest, const SplitOptions& options);

// "audio_path|transcript" per line, LF terminated. Durations are not stored;
// parse leaves them at 0 and fill_durations() re-derives them from audio.
std::string write_manifest(const CorpusManifest& manifest);
CorpusManifest parse_manifest(std::string_view text);
void fill_durations(CorpusManifest& manifest, const std::filesystem::path& audio_root);

// CSV with header start_s,end_s,text. Validates ordering and overlap.
std::vector<AlignmentSpan> parse_alignment_csv(std::string_view text);
void validate_spans(const std::vector<AlignmentSpan>& spans);

// CSV with header from,to.
Lexicon parse_lexicon_csv(std::string_view text);

}  // namespace dff
