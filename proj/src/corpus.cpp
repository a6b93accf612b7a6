#include "dff/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "dff/csv.hpp"
#include "dff/error.hpp"

namespace dff {

double CorpusManifest::total_duration_s() const {
  double total = 0.0;
  for (const auto& e : entries) total += e.duration_s;
  return total;
}

void CorpusManifest::validate() const {
  std::set<std::string_view> seen;
  for (const auto& e : entries) {
    if (e.audio_path.empty()) throw Error(Errc::MalformedLine, "empty audio path");
    if (!seen.insert(e.audio_path).second) throw Error(Errc::MalformedLine, "duplicate audio path " + e.audio_path);
    if (!is_charset_clean(e.transcript)) {
      throw Error(Errc::MalformedLine, "transcript of " + e.audio_path + " has characters outside the charset");
    }
    if (!std::isfinite(e.duration_s) || e.duration_s < 0.0) {
      throw Error(Errc::MalformedLine, "invalid duration for " + e.audio_path);
    }
  }
}

AudioBuffer trim_silence(const AudioBuffer& buffer, double threshold_dbfs, double frame_ms) {
  if (!(frame_ms > 0.0)) throw Error(Errc::InvalidArgument, "frame_ms must be positive");
  const auto samples = buffer.samples();
  const std::size_t n = samples.size();
  // Frame i starts at round(i * frame length); the length may be fractional.
  const double frame = std::max(1.0, frame_ms * buffer.sample_rate_hz() / 1000.0);
  auto edge = [&](std::size_t f) {
    return std::min(n, static_cast<std::size_t>(std::llround(static_cast<double>(f) * frame)));
  };
  std::size_t frames = 0;
  while (edge(frames) < n) ++frames;
  // Compare mean power against the threshold power; avoids log10(0).
  const double threshold_power = std::pow(10.0, threshold_dbfs / 10.0);

  auto loud = [&](std::size_t f) {
    std::size_t begin = edge(f);
    std::size_t end = edge(f + 1);
    double power = 0.0;
    for (std::size_t i = begin; i < end; ++i) power += samples[i] * samples[i];
    power /= static_cast<double>(end - begin);
    return power >= threshold_power;
  };

  std::size_t first = 0;
  while (first < frames && !loud(first)) ++first;
  if (first == frames) throw Error(Errc::AllSilent, "every frame is below " + std::to_string(threshold_dbfs) + " dBFS");
  std::size_t last = frames - 1;
  while (last > first && !loud(last)) --last;

  std::size_t begin = edge(first);
  std::size_t end = edge(last + 1);
  return AudioBuffer(std::vector<double>(samples.begin() + static_cast<std::ptrdiff_t>(begin),
                                         samples.begin() + static_cast<std::ptrdiff_t>(end)),
                     buffer.sample_rate_hz());
}

AudioBuffer pad_tail_silence(const AudioBuffer& buffer, double pad_s) {
  if (!(pad_s >= kMinPadS && pad_s <= kMaxPadS)) {
    throw Error(Errc::PadOutOfRange, "pad " + std::to_string(pad_s) + " s outside [0.3, 0.5]");
  }
  std::vector<double> out(buffer.samples().begin(), buffer.samples().end());
  out.resize(out.size() + static_cast<std::size_t>(std::llround(pad_s * buffer.sample_rate_hz())), 0.0);
  return AudioBuffer(std::move(out), buffer.sample_rate_hz());
}

void validate_spans(const std::vector<AlignmentSpan>& spans) {
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& s = spans[i];
    if (!std::isfinite(s.start_s) || !std::isfinite(s.end_s) || s.start_s < 0.0 || s.start_s >= s.end_s) {
      throw Error(Errc::SpanOutOfRange, "span " + std::to_string(i + 1) + " is not 0 <= start < end");
    }
    if (i > 0 && s.start_s < spans[i - 1].end_s) {
      throw Error(Errc::OverlappingSpans, "span " + std::to_string(i + 1) + " starts before span " +
                                              std::to_string(i) + " ends");
    }
  }
}

std::vector<Segment> cut_by_alignment(const AudioBuffer& buffer, const std::vector<AlignmentSpan>& spans,
                                      const std::string& stem, const Lexicon& lexicon) {
  validate_spans(spans);
  const double rate = buffer.sample_rate_hz();
  const auto samples = buffer.samples();
  std::vector<Segment> out;
  out.reserve(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& span = spans[i];
    auto begin = static_cast<std::size_t>(std::llround(span.start_s * rate));
    auto end = static_cast<std::size_t>(std::llround(span.end_s * rate));
    if (end > samples.size()) {
      throw Error(Errc::SpanOutOfRange, "span " + std::to_string(i + 1) + " ends at " + std::to_string(span.end_s) +
                                            " s, past the " + std::to_string(buffer.duration_s()) + " s recording");
    }
    AudioBuffer audio(std::vector<double>(samples.begin() + static_cast<std::ptrdiff_t>(begin),
                                          samples.begin() + static_cast<std::ptrdiff_t>(end)),
                      buffer.sample_rate_hz());
    char name[32];
    std::snprintf(name, sizeof name, "_%04zu.wav", i + 1);
    CorpusEntry entry{stem + name, normalize_text(span.text, lexicon), audio.duration_s()};
    out.push_back({std::move(audio), std::move(entry)});
  }
  return out;
}

DurationSplit filter_by_duration(const CorpusManifest& manifest, double min_s, double max_s) {
  if (!(min_s >= 0.0 && min_s < max_s)) throw Error(Errc::InvalidArgument, "need 0 <= min_s < max_s");
  DurationSplit out;
  for (const auto& e : manifest.entries) {
    (e.duration_s >= min_s && e.duration_s <= max_s ? out.kept : out.dropped).entries.push_back(e);
  }
  return out;
}

std::size_t validation_size(std::size_t n, const SplitOptions& options) {
  if (n == 0) throw Error(Errc::EmptyManifest, "cannot split an empty manifest");
  if (options.explicit_val_count) {
    if (*options.explicit_val_count >= n) {
      throw Error(Errc::ValCountTooLarge, "validation count " + std::to_string(*options.explicit_val_count) +
                                              " must be below the manifest size " + std::to_string(n));
    }
    return *options.explicit_val_count;
  }
  if (!(options.val_ratio > 0.0 && options.val_ratio < 1.0)) {
    throw Error(Errc::InvalidArgument, "val_ratio must be in (0, 1)");
  }
  auto v = static_cast<std::size_t>(std::llround(options.val_ratio * static_cast<double>(n)));
  if (options.val_floor && v < *options.val_floor) v = *options.val_floor;
  return std::min(v, n - 1);
}

namespace {

// Unbiased draw from [0, bound) by rejection; std::uniform_int_distribution
// is not specified bit-for-bit across standard libraries.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

TrainValSplit split_train_val(const CorpusManifest& manifest, const SplitOptions& options) {
  const std::size_t n = manifest.size();
  const std::size_t v = validation_size(n, options);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(options.seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[bounded(rng, i + 1)]);

  std::vector<bool> is_val(n, false);
  for (std::size_t i = 0; i < v; ++i) is_val[order[i]] = true;

  TrainValSplit out;
  for (std::size_t i = 0; i < n; ++i) (is_val[i] ? out.val : out.train).entries.push_back(manifest.entries[i]);
  return out;
}

std::string write_manifest(const CorpusManifest& manifest) {
  std::string out;
  for (const auto& e : manifest.entries) {
    out += e.audio_path;
    out += '|';
    out += e.transcript;
    out += '\n';
  }
  return out;
}

CorpusManifest parse_manifest(std::string_view text) {
  CorpusManifest m;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::size_t bar = line.find('|');
    if (bar == std::string_view::npos || line.find('|', bar + 1) != std::string_view::npos || bar == 0) {
      throw Error(Errc::MalformedLine, "line " + std::to_string(line_no) + ": expected audio_path|transcript");
    }
    CorpusEntry e{std::string(line.substr(0, bar)), std::string(line.substr(bar + 1)), 0.0};
    if (!seen.insert(e.audio_path).second) {
      throw Error(Errc::MalformedLine, "line " + std::to_string(line_no) + ": duplicate audio path " + e.audio_path);
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

void fill_durations(CorpusManifest& manifest, const std::filesystem::path& audio_root) {
  for (auto& e : manifest.entries) e.duration_s = read_wav_file(audio_root / e.audio_path).duration_s();
}

namespace {

void expect_header(const std::vector<CsvRow>& rows, const std::vector<std::string>& header, const char* what) {
  if (rows.empty() || rows.front() != header) {
    std::string joined;
    for (const auto& h : header) joined += (joined.empty() ? "" : ",") + h;
    throw Error(Errc::MalformedLine, std::string(what) + ": expected header " + joined);
  }
}

double parse_seconds(const std::string& s, std::size_t row) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::MalformedLine, "alignment row " + std::to_string(row) + ": bad number '" + s + "'");
  }
}

}  // namespace

std::vector<AlignmentSpan> parse_alignment_csv(std::string_view text) {
  auto rows = parse_csv(text);
  expect_header(rows, {"start_s", "end_s", "text"}, "alignment");
  std::vector<AlignmentSpan> spans;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 3) throw Error(Errc::MalformedLine, "alignment row " + std::to_string(i) + ": need 3 fields");
    spans.push_back({parse_seconds(rows[i][0], i), parse_seconds(rows[i][1], i), rows[i][2]});
  }
  validate_spans(spans);
  return spans;
}

Lexicon parse_lexicon_csv(std::string_view text) {
  auto rows = parse_csv(text);
  expect_header(rows, {"from", "to"}, "lexicon");
  Lexicon lex;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 2) throw Error(Errc::MalformedLine, "lexicon row " + std::to_string(i) + ": need 2 fields");
    lex[rows[i][0]] = rows[i][1];
  }
  return lex;
}

}  // namespace dff
