#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ruslan/charset.hpp"
#include "ruslan/error.hpp"

namespace ruslan::text {

enum class Case { Nominative, Genitive, Dative, Accusative, Instrumental, Prepositional };
enum class Gender { Masculine, Feminine, Neuter };

/// Inflection parameters for numerals. Accusative follows the inanimate paradigm.
struct MorphContext {
  Case grammatical_case = Case::Nominative;
  Gender gender = Gender::Masculine;
};

inline constexpr std::int64_t kMaxVerbalized = 999'999'999'999;

/// Error raised while normalizing, with the offending byte span of the input.
class SpanError : public Error {
 public:
  SpanError(const Error& cause, std::size_t begin, std::size_t end)
      : Error(cause.code(), std::string(cause.what()) + " at bytes [" + std::to_string(begin) + ", " +
                                std::to_string(end) + ")"),
        begin_(begin),
        end_(end) {}

  std::size_t begin() const noexcept { return begin_; }
  std::size_t end() const noexcept { return end_; }

 private:
  std::size_t begin_;
  std::size_t end_;
};

/// Acronym -> expansion table. Keys are runs of at least two Cyrillic capitals.
class AcronymLexicon {
 public:
  AcronymLexicon() = default;

  /// Parses `ACRONYM<TAB>expansion` lines; '#' starts a comment line.
  static AcronymLexicon load(const std::filesystem::path& path);
  static AcronymLexicon parse(std::string_view contents);

  /// Throws InvalidArgument if the key or the expansion violates the lexicon invariants.
  void add(std::string_view acronym, std::string_view expansion);

  const std::u32string* find(std::u32string_view token) const;
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<std::u32string, std::u32string>& entries() const noexcept { return entries_; }

 private:
  std::map<std::u32string, std::u32string> entries_;
};

/// Russian cardinal wording. Throws OutOfRange when |n| > kMaxVerbalized.
std::string number_to_words(std::int64_t n, MorphContext ctx = {});

/// Russian ordinal wording (0 -> "нулевой"). Throws OutOfRange outside [0, kMaxVerbalized].
std::string ordinal_to_words(std::int64_t n, MorphContext ctx = {});

bool is_valid_date(int day, int month, int year) noexcept;

/// "<neuter ordinal day> <month genitive> <genitive ordinal year> года".
std::string date_to_words(int day, int month, int year);

/// Genitive month name for month in 1..12.
std::string_view month_genitive(int month);

std::string expand_acronyms(std::string_view text, const AcronymLexicon& lexicon);

/// Keeps charset members only. Unicode whitespace becomes a space, space runs
/// collapse, and leading/trailing spaces are stripped.
std::string filter_charset(std::string_view text, const Charset& charset = Charset::standard());

/// Replaces dates (d.m.yyyy) and digit runs with words. Errors carry byte spans.
std::string verbalize_numbers(std::string_view text);

/// expand_acronyms -> verbalize_numbers -> filter_charset, iterated to a fixed point.
std::string normalize(std::string_view text, const AcronymLexicon& lexicon,
                      const Charset& charset = Charset::standard());

}  // namespace ruslan::text
