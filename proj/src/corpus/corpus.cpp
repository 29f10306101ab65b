#include "ruslan/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "ruslan/error.hpp"
#include "ruslan/utf8.hpp"

namespace ruslan::corpus {

namespace {

std::string line_error(std::size_t line_no, const std::string& what) {
  return "manifest line " + std::to_string(line_no) + ": " + what;
}

}  // namespace

const audio::WavInfo& Utterance::audio_info() const {
  if (!info_) info_ = audio::read_wav_info(resolved_audio);
  return *info_;
}

bool is_valid_id(std::string_view id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

Corpus parse_manifest(std::string_view contents, const std::filesystem::path& audio_root) {
  Corpus corpus;
  corpus.root = audio_root;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    std::string_view line = contents.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    const auto p1 = line.find('|');
    const auto p2 = p1 == std::string_view::npos ? p1 : line.find('|', p1 + 1);
    if (p2 == std::string_view::npos || line.find('|', p2 + 1) != std::string_view::npos) {
      throw Error(ErrorCode::MalformedLine, line_error(line_no, "expected id|audioPath|text"));
    }
    Utterance u;
    u.id = std::string(line.substr(0, p1));
    u.audio_path = std::string(line.substr(p1 + 1, p2 - p1 - 1));
    u.text = std::string(line.substr(p2 + 1));
    if (!is_valid_id(u.id)) throw Error(ErrorCode::MalformedLine, line_error(line_no, "bad id '" + u.id + "'"));
    if (u.audio_path.empty()) throw Error(ErrorCode::MalformedLine, line_error(line_no, "empty audio path"));
    if (!seen.insert(u.id).second) throw Error(ErrorCode::DuplicateId, line_error(line_no, u.id));
    u.resolved_audio = audio_root / u.audio_path;
    if (!std::filesystem::is_regular_file(u.resolved_audio)) {
      throw Error(ErrorCode::MissingAudio, line_error(line_no, u.resolved_audio.string()));
    }
    corpus.utterances.push_back(std::move(u));
  }
  return corpus;
}

Corpus load_manifest(const std::filesystem::path& path, std::optional<std::filesystem::path> audio_root) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open manifest " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str(), audio_root.value_or(path.parent_path()));
}

std::string_view to_string(FindingKind kind) {
  switch (kind) {
    case FindingKind::OutOfCharset: return "out-of-charset";
    case FindingKind::AudioUnreadable: return "audio-unreadable";
    case FindingKind::AudioFormat: return "audio-format";
    case FindingKind::ZeroDuration: return "zero-duration";
    case FindingKind::UnexpandedCapitals: return "unexpanded-capitals";
    case FindingKind::EmptyText: return "empty-text";
  }
  return "unknown";
}

std::vector<Finding> validate(const Corpus& corpus, const text::Charset& charset,
                              const text::AcronymLexicon& lexicon) {
  std::vector<Finding> findings;
  for (const auto& u : corpus.utterances) {
    const auto cps = utf8::decode(u.text);
    if (cps.empty()) findings.push_back({u.id, FindingKind::EmptyText, "text is empty"});

    std::u32string foreign;
    for (char32_t c : cps) {
      if (!charset.contains(c) && foreign.find(c) == std::u32string::npos) foreign.push_back(c);
    }
    if (!foreign.empty()) findings.push_back({u.id, FindingKind::OutOfCharset, "'" + utf8::encode(foreign) + "'"});

    std::vector<std::string> runs;
    for (std::size_t i = 0; i < cps.size();) {
      if (!text::is_cyrillic_upper(cps[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < cps.size() && text::is_cyrillic_upper(cps[j])) ++j;
      // Only a whole capital token counts; "Мир" or "ВОт" mixed-case words do not.
      const bool bounded = (i == 0 || !text::is_cyrillic_letter(cps[i - 1])) &&
                           (j == cps.size() || !text::is_cyrillic_letter(cps[j]));
      if (j - i >= 2 && bounded) {
        const std::u32string_view run(cps.data() + i, j - i);
        runs.push_back(utf8::encode(run) + (lexicon.find(run) ? " (in lexicon)" : ""));
      }
      i = j;
    }
    if (!runs.empty()) {
      std::string detail;
      for (const auto& r : runs) detail += (detail.empty() ? "" : ", ") + r;
      findings.push_back({u.id, FindingKind::UnexpandedCapitals, detail});
    }

    try {
      const auto& info = u.audio_info();
      if (!info.is_pcm16_mono() || info.sample_rate != audio::kCorpusSampleRate) {
        findings.push_back({u.id, FindingKind::AudioFormat,
                            std::to_string(info.sample_rate) + " Hz, " + std::to_string(info.channels) + " ch, " +
                                std::to_string(info.bits_per_sample) + "-bit, format " +
                                std::to_string(info.format_tag)});
      }
      if (info.frames == 0) findings.push_back({u.id, FindingKind::ZeroDuration, "no audio frames"});
    } catch (const Error& e) {
      findings.push_back({u.id, FindingKind::AudioUnreadable, e.what()});
    }
  }
  return findings;
}

std::size_t count_words(std::string_view text) {
  const auto cps = utf8::decode(text);
  std::size_t words = 0;
  bool in_word = false;
  for (char32_t c : cps) {
    const bool letter = text::is_cyrillic_letter(c);
    if (letter && !in_word) ++words;
    in_word = letter;
  }
  return words;
}

std::size_t count_symbols(std::string_view text, const CountingRule& rule, const text::Charset& charset) {
  std::size_t n = 0;
  for (char32_t c : utf8::decode(text)) {
    if (c == U' ' && !rule.count_spaces) continue;
    if (charset.contains(c)) ++n;
  }
  return n;
}

std::string format_hms(double seconds) {
  const auto total = static_cast<long long>(std::llround(seconds));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld", total / 3600, total / 60 % 60, total % 60);
  return buf;
}

CorpusStats compute_stats(const Corpus& corpus, const CountingRule& rule) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "no utterances");
  CorpusStats s;
  s.sample_count = corpus.size();
  // Frame totals per sample rate keep the duration sum exact and order independent.
  std::map<std::uint32_t, std::uint64_t> frames;
  std::set<std::u32string> vocabulary;
  bool first = true;
  for (const auto& u : corpus.utterances) {
    const auto& info = u.audio_info();
    frames[info.sample_rate] += info.frames;
    const double d = info.duration();
    const std::size_t words = count_words(u.text);
    const std::size_t symbols = count_symbols(u.text, rule);
    s.total_words += words;
    s.total_symbols += symbols;
    if (first) {
      s.min_duration = s.max_duration = d;
      s.min_words = s.max_words = words;
      s.min_symbols = s.max_symbols = symbols;
      first = false;
    } else {
      s.min_duration = std::min(s.min_duration, d);
      s.max_duration = std::max(s.max_duration, d);
      s.min_words = std::min(s.min_words, words);
      s.max_words = std::max(s.max_words, words);
      s.min_symbols = std::min(s.min_symbols, symbols);
      s.max_symbols = std::max(s.max_symbols, symbols);
    }
    const auto cps = utf8::decode(u.text);
    for (std::size_t i = 0; i < cps.size();) {
      if (!text::is_cyrillic_letter(cps[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < cps.size() && text::is_cyrillic_letter(cps[j])) ++j;
      vocabulary.insert(text::to_lower(std::u32string_view(cps.data() + i, j - i)));
      i = j;
    }
  }
  s.unique_words = vocabulary.size();
  for (const auto& [rate, n] : frames) {
    if (rate > 0) s.total_duration += static_cast<double>(n) / rate;
  }
  return s;
}

Histogram histogram(const std::vector<double>& values, std::size_t bins, HistogramAxis axis) {
  if (values.empty()) throw Error(ErrorCode::EmptyCorpus, "no values to bin");
  if (bins == 0) throw Error(ErrorCode::InvalidArgument, "bin count must be at least 1");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  Histogram h;
  h.axis = axis;
  if (lo == hi) {
    h.edges = {lo - 0.5, lo + 0.5};
    h.counts = {values.size()};
    return h;
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double v : values) {
    auto idx = static_cast<std::size_t>(std::floor((v - lo) / width));
    idx = std::min(idx, bins - 1);
    // Guard against rounding that puts a value on the wrong side of an edge.
    while (idx > 0 && v < h.edges[idx]) --idx;
    while (idx + 1 < bins && v >= h.edges[idx + 1]) ++idx;
    ++h.counts[idx];
  }
  return h;
}

Histogram histogram(const Corpus& corpus, HistogramAxis axis, std::size_t bins, const CountingRule& rule) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "no utterances");
  std::vector<double> values;
  values.reserve(corpus.size());
  for (const auto& u : corpus.utterances) {
    switch (axis) {
      case HistogramAxis::Duration: values.push_back(u.duration()); break;
      case HistogramAxis::Symbols: values.push_back(static_cast<double>(count_symbols(u.text, rule))); break;
      case HistogramAxis::Words: values.push_back(static_cast<double>(count_words(u.text))); break;
    }
  }
  return histogram(values, bins, axis);
}

std::vector<int> encode_text(std::string_view text, const text::Charset& charset) {
  std::vector<int> ids;
  const auto cps = utf8::decode(text);
  ids.reserve(cps.size());
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const auto idx = charset.index_of(cps[i]);
    if (!idx) {
      throw Error(ErrorCode::UnknownSymbol,
                  "'" + utf8::encode(cps[i]) + "' at position " + std::to_string(i) + " is not in the charset");
    }
    ids.push_back(*idx);
  }
  return ids;
}

std::string decode_ids(const std::vector<int>& ids, const text::Charset& charset) {
  std::u32string out;
  out.reserve(ids.size());
  for (int id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= charset.size()) {
      throw Error(ErrorCode::IndexOutOfRange, "id " + std::to_string(id) + " outside [0, " +
                                                  std::to_string(charset.size()) + ")");
    }
    out.push_back(charset.symbol(static_cast<std::size_t>(id)));
  }
  return utf8::encode(out);
}

}  // namespace ruslan::corpus
