#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ruslan/charset.hpp"

namespace ruslan::phon {

enum class PhoneClass { Vowel, Consonant };

/// Combining acute accent; placed after a vowel letter it marks stress.
inline constexpr char32_t kStressMark = 0x0301;

/// The fixed 42-label inventory: 7 vowels (a o u e i ɨ ə) and 35 consonants
/// (14 hard/soft pairs, x, ʂ ʐ ʦ ʨ ɕ j).
class PhonemeInventory {
 public:
  static const PhonemeInventory& standard();

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  bool contains(std::string_view label) const;
  PhoneClass class_of(std::string_view label) const;

 private:
  PhonemeInventory();
  std::vector<std::string> labels_;
  std::map<std::string, PhoneClass, std::less<>> classes_;
};

/// Transcription of a text: one label sequence per word.
struct PhonemeString {
  std::vector<std::vector<std::string>> words;

  std::size_t phone_count() const noexcept;
  /// Space-separated labels with " | " between words.
  std::string to_string() const;
};

bool is_voiced_obstruent(std::string_view label);

/// Rule-based transcription of normalized text. Rules, in order:
///  1. letter -> base phone; я е ё ю (and и after ь) yield j + vowel word-initially,
///     after a vowel, or after ь/ъ;
///  2. paired consonants palatalize before е ё и ю я and ь;
///  3. stress: explicit U+0301 mark, else ё, else the first syllable;
///  4. unstressed vowels: after soft consonants a/o/e -> i; otherwise o/a -> a in
///     the pretonic or word-initial syllable and -> ə elsewhere, e -> ɨ;
///  5. word-final voiced obstruents devoice;
///  6. obstruents take the voicing of a following obstruent (в does not trigger).
/// Throws NotNormalized on any symbol outside the charset (stress marks excepted).
PhonemeString transcribe(std::string_view text, const text::Charset& charset = text::Charset::standard());

/// Relative phoneme frequencies; values sum to 1.
struct PhonemeDistribution {
  std::map<std::string, double> frequency;
  std::size_t total_phones = 0;

  double vowel_mass() const;
  /// (label, frequency) sorted by frequency descending, then label.
  std::vector<std::pair<std::string, double>> sorted() const;
};

/// Throws EmptyCorpus when the texts contain no phones at all.
PhonemeDistribution phoneme_distribution(std::span<const std::string> texts);

/// `phoneme<TAB>frequency` lines, most frequent first.
void write_distribution(std::ostream& out, const PhonemeDistribution& dist);
void write_distribution(const std::filesystem::path& path, const PhonemeDistribution& dist);

}  // namespace ruslan::phon
