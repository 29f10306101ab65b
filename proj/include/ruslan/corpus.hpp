#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ruslan/audio.hpp"
#include "ruslan/charset.hpp"
#include "ruslan/textnorm.hpp"

namespace ruslan::corpus {

struct Utterance {
  std::string id;
  std::string audio_path;  // as written in the manifest
  std::string text;
  std::filesystem::path resolved_audio;

  /// Header info, read from disk on first use.
  const audio::WavInfo& audio_info() const;
  double duration() const { return audio_info().duration(); }

 private:
  mutable std::optional<audio::WavInfo> info_;
};

struct Corpus {
  std::filesystem::path root;  // audio paths are relative to this
  std::vector<Utterance> utterances;

  std::size_t size() const { return utterances.size(); }
  bool empty() const { return utterances.empty(); }
};

bool is_valid_id(std::string_view id);

/// Manifest lines are `id|audioPath|text`. Blank lines are skipped; audio
/// paths resolve against `audio_root` (default: the manifest's directory).
Corpus load_manifest(const std::filesystem::path& path, std::optional<std::filesystem::path> audio_root = {});
Corpus parse_manifest(std::string_view contents, const std::filesystem::path& audio_root);

enum class FindingKind { OutOfCharset, AudioUnreadable, AudioFormat, ZeroDuration, UnexpandedCapitals, EmptyText };
std::string_view to_string(FindingKind kind);

struct Finding {
  std::string id;
  FindingKind kind;
  std::string detail;
};

/// Exhaustive check: at most one finding per utterance and kind.
std::vector<Finding> validate(const Corpus& corpus, const text::Charset& charset = text::Charset::standard(),
                              const text::AcronymLexicon& lexicon = {});

struct CountingRule {
  bool count_spaces = true;
};

/// Words are maximal runs of Cyrillic letters.
std::size_t count_words(std::string_view text);
std::size_t count_symbols(std::string_view text, const CountingRule& rule = {},
                          const text::Charset& charset = text::Charset::standard());

struct CorpusStats {
  std::size_t sample_count = 0;
  double total_duration = 0.0;  // seconds
  std::size_t total_symbols = 0;
  std::size_t total_words = 0;
  std::size_t unique_words = 0;
  double min_duration = 0.0, max_duration = 0.0;
  std::size_t min_symbols = 0, max_symbols = 0;
  std::size_t min_words = 0, max_words = 0;

  double average_words() const { return static_cast<double>(total_words) / static_cast<double>(sample_count); }
};

/// hh:mm:ss rounded to the nearest second; hours are not wrapped.
std::string format_hms(double seconds);

CorpusStats compute_stats(const Corpus& corpus, const CountingRule& rule = {});

enum class HistogramAxis { Duration, Symbols, Words };

struct Histogram {
  HistogramAxis axis;
  std::vector<double> edges;  // counts.size() + 1 strictly increasing edges
  std::vector<std::size_t> counts;
};

/// Equal-width bins over [min, max] with the last bin closed on the right.
/// When every value is equal the result is one unit-width bin around it.
Histogram histogram(const std::vector<double>& values, std::size_t bins, HistogramAxis axis);
Histogram histogram(const Corpus& corpus, HistogramAxis axis, std::size_t bins, const CountingRule& rule = {});

std::vector<int> encode_text(std::string_view text, const text::Charset& charset = text::Charset::standard());
std::string decode_ids(const std::vector<int>& ids, const text::Charset& charset = text::Charset::standard());

}  // namespace ruslan::corpus
