#include "ruslan/textnorm.hpp"

#include <array>
#include <optional>
#include <vector>
#include <fstream>
#include <sstream>

#include "ruslan/utf8.hpp"

namespace ruslan::text {

namespace {

constexpr std::array<const char*, 12> kMonthGenitive = {
    "января", "февраля", "марта",    "апреля",  "мая",    "июня",
    "июля",   "августа", "сентября", "октября", "ноября", "декабря",
};

bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

bool is_unicode_space(char32_t c) {
  switch (c) {
    case U'\t': case U'\n': case U'\v': case U'\f': case U'\r': case U' ':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Byte offsets of every code point in the decoded text, plus the total length.
std::vector<std::size_t> byte_offsets(std::u32string_view text) {
  std::vector<std::size_t> offsets;
  offsets.reserve(text.size() + 1);
  std::size_t pos = 0;
  for (char32_t c : text) {
    offsets.push_back(pos);
    pos += utf8::encode(c).size();
  }
  offsets.push_back(pos);
  return offsets;
}

std::int64_t parse_digits(std::u32string_view digits) {
  std::int64_t value = 0;
  for (char32_t c : digits) {
    if (value > kMaxVerbalized) break;  // already out of range, avoid overflow
    value = value * 10 + static_cast<std::int64_t>(c - U'0');
  }
  return value;
}

std::size_t digit_run(std::u32string_view s, std::size_t from) {
  std::size_t end = from;
  while (end < s.size() && is_digit(s[end])) ++end;
  return end - from;
}

// Recognizes d{1,2}.d{1,2}.d{4} starting at a run boundary; returns its length or 0.
std::size_t match_date(std::u32string_view s, std::size_t i) {
  const std::size_t d = digit_run(s, i);
  if (d < 1 || d > 2 || i + d >= s.size() || s[i + d] != U'.') return 0;
  const std::size_t m_at = i + d + 1;
  const std::size_t m = digit_run(s, m_at);
  if (m < 1 || m > 2 || m_at + m >= s.size() || s[m_at + m] != U'.') return 0;
  const std::size_t y_at = m_at + m + 1;
  if (digit_run(s, y_at) != 4) return 0;
  return y_at + 4 - i;
}

// Month genitive word directly after a single space, ending at a word boundary.
bool followed_by_month(std::u32string_view s, std::size_t pos) {
  if (pos >= s.size() || s[pos] != U' ') return false;
  std::size_t end = pos + 1;
  while (end < s.size() && is_cyrillic_letter(s[end])) ++end;
  const auto word = utf8::encode(to_lower(s.substr(pos + 1, end - pos - 1)));
  for (const char* month : kMonthGenitive) {
    if (word == month) return true;
  }
  return false;
}

void append_verbalized(std::u32string& out, std::u32string_view source, std::size_t end_pos,
                       const std::string& words) {
  if (!out.empty() && (is_cyrillic_letter(out.back()) || is_digit(out.back()))) out.push_back(U' ');
  out += utf8::decode(words);
  if (end_pos < source.size() && (is_cyrillic_letter(source[end_pos]) || is_digit(source[end_pos]))) {
    out.push_back(U' ');
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Dates

bool is_valid_date(int day, int month, int year) noexcept {
  if (year < 1 || year > 9999 || month < 1 || month > 12 || day < 1) return false;
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int limit = kDays[static_cast<std::size_t>(month - 1)];
  const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  if (month == 2 && leap) limit = 29;
  return day <= limit;
}

std::string_view month_genitive(int month) {
  if (month < 1 || month > 12) throw Error(ErrorCode::InvalidDate, "month " + std::to_string(month));
  return kMonthGenitive[static_cast<std::size_t>(month - 1)];
}

std::string date_to_words(int day, int month, int year) {
  if (!is_valid_date(day, month, year)) {
    throw Error(ErrorCode::InvalidDate,
                std::to_string(day) + "." + std::to_string(month) + "." + std::to_string(year));
  }
  std::string out = ordinal_to_words(day, {Case::Nominative, Gender::Neuter});
  out += ' ';
  out += month_genitive(month);
  out += ' ';
  out += ordinal_to_words(year, {Case::Genitive, Gender::Masculine});
  out += " года";
  return out;
}

// ---------------------------------------------------------------------------
// Acronyms

void AcronymLexicon::add(std::string_view acronym, std::string_view expansion) {
  const auto key = utf8::decode(acronym);
  if (key.size() < 2) throw Error(ErrorCode::InvalidArgument, "acronym shorter than 2 letters");
  for (char32_t c : key) {
    if (!is_cyrillic_upper(c)) {
      throw Error(ErrorCode::InvalidArgument, "acronym must be Cyrillic capitals: " + std::string(acronym));
    }
  }
  const auto value = utf8::decode(expansion);
  if (value.empty() || filter_charset(expansion) != expansion) {
    throw Error(ErrorCode::InvalidArgument,
                "expansion of " + std::string(acronym) + " must be non-empty, trimmed charset text");
  }
  const auto previous = entries_.find(key);
  std::optional<std::u32string> old;
  if (previous != entries_.end()) old = previous->second;
  entries_[key] = value;
  // An expansion must not itself contain a key, or expansion would not be idempotent.
  for (const auto& [k, v] : entries_) {
    std::size_t i = 0;
    while (i < v.size()) {
      if (!is_cyrillic_letter(v[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < v.size() && is_cyrillic_letter(v[j])) ++j;
      if (entries_.count(v.substr(i, j - i))) {
        const auto bad = utf8::encode(k);
        if (old) {
          entries_[key] = *old;
        } else {
          entries_.erase(key);
        }
        throw Error(ErrorCode::InvalidArgument, "expansion of " + bad + " contains an acronym key");
      }
      i = j;
    }
  }
}

const std::u32string* AcronymLexicon::find(std::u32string_view token) const {
  const auto it = entries_.find(std::u32string(token));
  return it == entries_.end() ? nullptr : &it->second;
}

AcronymLexicon AcronymLexicon::parse(std::string_view contents) {
  AcronymLexicon lexicon;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    std::string_view line = contents.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::MalformedLine, "acronym lexicon line " + std::to_string(line_no));
    }
    try {
      lexicon.add(trim(line.substr(0, tab)), trim(line.substr(tab + 1)));
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedLine, "acronym lexicon line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return lexicon;
}

AcronymLexicon AcronymLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open acronym lexicon " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

// Tokens are maximal runs of Cyrillic letters and must match a key as a whole,
// so the longest key covering a token is the token itself.
std::string expand_acronyms(std::string_view text, const AcronymLexicon& lexicon) {
  if (lexicon.empty()) return std::string(text);
  const auto s = utf8::decode(text);
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_cyrillic_letter(s[i])) {
      out.push_back(s[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && is_cyrillic_letter(s[j])) ++j;
    const std::u32string_view token(s.data() + i, j - i);
    if (const auto* expansion = lexicon.find(token)) {
      out += *expansion;
    } else {
      out += token;
    }
    i = j;
  }
  return utf8::encode(out);
}

// ---------------------------------------------------------------------------
// Filtering and the pipeline

std::string filter_charset(std::string_view text, const Charset& charset) {
  const auto s = utf8::decode(text);
  std::u32string out;
  out.reserve(s.size());
  for (char32_t c : s) {
    if (is_unicode_space(c)) c = U' ';
    if (!charset.contains(c)) continue;
    if (c == U' ' && (out.empty() || out.back() == U' ')) continue;
    out.push_back(c);
  }
  if (!out.empty() && out.back() == U' ') out.pop_back();
  return utf8::encode(out);
}

std::string verbalize_numbers(std::string_view text) {
  const auto s = utf8::decode(text);
  const auto offsets = byte_offsets(s);
  std::u32string out;
  out.reserve(s.size() * 2);
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_digit(s[i])) {
      out.push_back(s[i++]);
      continue;
    }
    if (const std::size_t len = match_date(s, i); len > 0 && !(i + len < s.size() && is_digit(s[i + len]))) {
      const auto day = static_cast<int>(parse_digits(s.substr(i, digit_run(s, i))));
      const std::size_t m_at = i + digit_run(s, i) + 1;
      const auto month = static_cast<int>(parse_digits(s.substr(m_at, digit_run(s, m_at))));
      const auto year = static_cast<int>(parse_digits(s.substr(i + len - 4, 4)));
      try {
        append_verbalized(out, s, i + len, date_to_words(day, month, year));
      } catch (const Error& e) {
        throw SpanError(e, offsets[i], offsets[i + len]);
      }
      i += len;
      continue;
    }
    const std::size_t len = digit_run(s, i);
    const auto digits = s.substr(i, len);
    try {
      const std::int64_t value = parse_digits(digits);
      if (value > kMaxVerbalized) {
        throw Error(ErrorCode::OutOfRange, utf8::encode(digits) + " has more than 12 significant digits");
      }
      // Date fragment: "5 мая" reads as the genitive day ordinal.
      if (value >= 1 && value <= 31 && followed_by_month(s, i + len)) {
        append_verbalized(out, s, i + len, ordinal_to_words(value, {Case::Genitive, Gender::Neuter}));
      } else {
        append_verbalized(out, s, i + len, number_to_words(value));
      }
    } catch (const Error& e) {
      throw SpanError(e, offsets[i], offsets[i + len]);
    }
    i += len;
  }
  return utf8::encode(out);
}

std::string normalize(std::string_view text, const AcronymLexicon& lexicon, const Charset& charset) {
  std::string current(text);
  // Deleting symbols can join letters into a new lexicon key, so the pipeline is
  // repeated until stable. Expansions never contain keys, hence at most two
  // effective passes.
  for (int pass = 0; pass < 4; ++pass) {
    std::string next = filter_charset(verbalize_numbers(expand_acronyms(current, lexicon)), charset);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

}  // namespace ruslan::text
