#include "ruslan/phonemics.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "ruslan/error.hpp"
#include "ruslan/utf8.hpp"

namespace ruslan::phon {

namespace {

constexpr std::string_view kSoft = "ʲ";

const std::vector<std::string> kVowels = {"a", "o", "u", "e", "i", "ɨ", "ə"};
const std::vector<std::string> kPaired = {"p", "b", "t", "d", "k", "g", "f", "v", "s", "z", "m", "n", "l", "r"};
const std::vector<std::string> kUnpaired = {"x", "ʂ", "ʐ", "ʦ", "ʨ", "ɕ", "j"};

// Voiced <-> voiceless obstruent pairs (base labels).
const std::map<std::string, std::string, std::less<>> kDevoice = {
    {"b", "p"}, {"d", "t"}, {"g", "k"}, {"v", "f"}, {"z", "s"}, {"ʐ", "ʂ"}};
const std::map<std::string, std::string, std::less<>> kVoice = {
    {"p", "b"}, {"t", "d"}, {"k", "g"}, {"f", "v"}, {"s", "z"}, {"ʂ", "ʐ"}};
const std::vector<std::string> kUnpairedVoiceless = {"x", "ʦ", "ʨ", "ɕ"};

struct Phone {
  std::string base;
  bool vowel = false;
  bool soft = false;
  bool stressed = false;
  bool after_soft = false;  // vowels: preceded by a soft consonant or j
  bool stress_marked = false;
};

bool is_vowel_letter(char32_t c) { return std::u32string_view(U"аеёиоуыэюя").find(c) != std::u32string_view::npos; }
bool is_iotated(char32_t c) { return std::u32string_view(U"яеёю").find(c) != std::u32string_view::npos; }

std::optional<std::string> consonant_base(char32_t c) {
  switch (c) {
    case U'б': return "b";
    case U'в': return "v";
    case U'г': return "g";
    case U'д': return "d";
    case U'ж': return "ʐ";
    case U'з': return "z";
    case U'к': return "k";
    case U'л': return "l";
    case U'м': return "m";
    case U'н': return "n";
    case U'п': return "p";
    case U'р': return "r";
    case U'с': return "s";
    case U'т': return "t";
    case U'ф': return "f";
    case U'х': return "x";
    case U'ц': return "ʦ";
    case U'ч': return "ʨ";
    case U'ш': return "ʂ";
    case U'щ': return "ɕ";
    case U'й': return "j";
    default: return std::nullopt;
  }
}

bool palatalizable(const std::string& base) {
  return std::find(kPaired.begin(), kPaired.end(), base) != kPaired.end();
}

bool inherently_soft(const std::string& base) { return base == "ʨ" || base == "ɕ" || base == "j"; }
bool always_hard(const std::string& base) { return base == "ʐ" || base == "ʂ" || base == "ʦ"; }

std::string stressed_quality(char32_t letter, bool after_hard_sibilant) {
  switch (letter) {
    case U'а': case U'я': return "a";
    case U'о': case U'ё': return "o";
    case U'у': case U'ю': return "u";
    case U'э': case U'е': return "e";
    case U'ы': return "ɨ";
    case U'и': return after_hard_sibilant ? "ɨ" : "i";
    default: return "ə";
  }
}

bool is_obstruent(const Phone& p) {
  if (p.vowel) return false;
  return kDevoice.count(p.base) || kVoice.count(p.base) ||
         std::find(kUnpairedVoiceless.begin(), kUnpairedVoiceless.end(), p.base) != kUnpairedVoiceless.end();
}

bool is_voiced(const Phone& p) { return kDevoice.count(p.base) > 0; }

void devoice(Phone& p) {
  if (const auto it = kDevoice.find(p.base); it != kDevoice.end()) p.base = it->second;
}

void voice(Phone& p) {
  if (const auto it = kVoice.find(p.base); it != kVoice.end()) p.base = it->second;
}

struct Letter {
  char32_t ch;
  bool stress_marked;
};

std::vector<std::string> transcribe_word(const std::vector<Letter>& word) {
  std::vector<Phone> phones;
  bool separator = false;  // previous letter was ь or ъ
  for (const auto& [ch, marked] : word) {
    if (ch == U'ь' || ch == U'ъ') {
      if (ch == U'ь' && !phones.empty() && !phones.back().vowel && palatalizable(phones.back().base)) {
        phones.back().soft = true;
      }
      separator = true;
      continue;
    }
    if (const auto base = consonant_base(ch)) {
      phones.push_back({*base});
      separator = false;
      continue;
    }
    if (!is_vowel_letter(ch)) continue;

    const bool word_start = phones.empty();
    const bool after_vowel = !phones.empty() && phones.back().vowel;
    const bool needs_j = (is_iotated(ch) && (word_start || after_vowel || separator)) || (ch == U'и' && separator);
    bool after_soft = false;
    bool after_hard_sibilant = false;
    if (needs_j) {
      phones.push_back({"j"});
      after_soft = true;
    } else if (!phones.empty() && !phones.back().vowel) {
      Phone& prev = phones.back();
      if ((is_iotated(ch) || ch == U'и') && palatalizable(prev.base)) prev.soft = true;
      after_soft = prev.soft || inherently_soft(prev.base);
      after_hard_sibilant = always_hard(prev.base);
    }
    Phone v{stressed_quality(ch, after_hard_sibilant)};
    v.vowel = true;
    v.after_soft = after_soft;
    v.stress_marked = marked || ch == U'ё';
    phones.push_back(std::move(v));
    separator = false;
  }

  // Stress: explicit mark, then ё, then the first syllable.
  std::vector<std::size_t> vowels;
  for (std::size_t i = 0; i < phones.size(); ++i) {
    if (phones[i].vowel) vowels.push_back(i);
  }
  std::size_t stressed = 0;
  for (std::size_t k = 0; k < vowels.size(); ++k) {
    if (phones[vowels[k]].stress_marked) {
      stressed = k;
      break;
    }
  }
  for (std::size_t k = 0; k < vowels.size(); ++k) {
    Phone& v = phones[vowels[k]];
    if (k == stressed) {
      v.stressed = true;
      continue;
    }
    const bool first_degree = k + 1 == stressed || vowels[k] == 0;
    if (v.after_soft) {
      if (v.base == "a" || v.base == "o" || v.base == "e") v.base = "i";
    } else if (v.base == "a" || v.base == "o") {
      v.base = first_degree ? "a" : "ə";
    } else if (v.base == "e") {
      v.base = "ɨ";
    }
  }

  if (!phones.empty()) devoice(phones.back());
  for (std::size_t i = phones.size(); i-- > 1;) {
    Phone& cur = phones[i - 1];
    const Phone& next = phones[i];
    if (!is_obstruent(cur) || !is_obstruent(next) || next.base == "v") continue;
    if (is_voiced(next)) {
      voice(cur);
    } else {
      devoice(cur);
    }
  }

  std::vector<std::string> labels;
  labels.reserve(phones.size());
  for (const auto& p : phones) labels.push_back(p.soft ? p.base + std::string(kSoft) : p.base);
  return labels;
}

}  // namespace

PhonemeInventory::PhonemeInventory() {
  for (const auto& v : kVowels) {
    labels_.push_back(v);
    classes_.emplace(v, PhoneClass::Vowel);
  }
  for (const auto& c : kPaired) {
    for (const auto& label : {c, c + std::string(kSoft)}) {
      labels_.push_back(label);
      classes_.emplace(label, PhoneClass::Consonant);
    }
  }
  for (const auto& c : kUnpaired) {
    labels_.push_back(c);
    classes_.emplace(c, PhoneClass::Consonant);
  }
}

const PhonemeInventory& PhonemeInventory::standard() {
  static const PhonemeInventory kInventory;
  return kInventory;
}

bool PhonemeInventory::contains(std::string_view label) const { return classes_.find(label) != classes_.end(); }

PhoneClass PhonemeInventory::class_of(std::string_view label) const {
  const auto it = classes_.find(label);
  if (it == classes_.end()) throw Error(ErrorCode::InvalidArgument, "unknown phoneme " + std::string(label));
  return it->second;
}

bool is_voiced_obstruent(std::string_view label) {
  std::string base(label);
  if (base.size() > kSoft.size() && base.compare(base.size() - kSoft.size(), kSoft.size(), kSoft) == 0) {
    base.resize(base.size() - kSoft.size());
  }
  return kDevoice.count(base) > 0;
}

std::size_t PhonemeString::phone_count() const noexcept {
  std::size_t n = 0;
  for (const auto& w : words) n += w.size();
  return n;
}

std::string PhonemeString::to_string() const {
  std::string out;
  for (std::size_t w = 0; w < words.size(); ++w) {
    if (w > 0) out += " | ";
    for (std::size_t i = 0; i < words[w].size(); ++i) {
      if (i > 0) out += ' ';
      out += words[w][i];
    }
  }
  return out;
}

PhonemeString transcribe(std::string_view text, const text::Charset& charset) {
  const auto cps = utf8::decode(text);
  PhonemeString result;
  std::vector<Letter> word;
  auto flush = [&] {
    if (!word.empty()) {
      auto labels = transcribe_word(word);
      if (!labels.empty()) result.words.push_back(std::move(labels));
      word.clear();
    }
  };
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i];
    if (c == kStressMark) {
      if (!word.empty()) word.back().stress_marked = true;
      continue;
    }
    if (!charset.contains(c)) {
      throw Error(ErrorCode::NotNormalized, "symbol U+" + [&] {
        std::ostringstream hex;
        hex << std::hex << std::uppercase << static_cast<std::uint32_t>(c);
        return hex.str();
      }() + " is outside the charset");
    }
    if (text::is_cyrillic_letter(c)) {
      word.push_back({text::to_lower(c), false});
    } else {
      flush();
    }
  }
  flush();
  return result;
}

double PhonemeDistribution::vowel_mass() const {
  double mass = 0.0;
  const auto& inv = PhonemeInventory::standard();
  for (const auto& [label, f] : frequency) {
    if (inv.class_of(label) == PhoneClass::Vowel) mass += f;
  }
  return mass;
}

std::vector<std::pair<std::string, double>> PhonemeDistribution::sorted() const {
  std::vector<std::pair<std::string, double>> out(frequency.begin(), frequency.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

PhonemeDistribution phoneme_distribution(std::span<const std::string> texts) {
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;
  for (const auto& t : texts) {
    for (const auto& word : transcribe(t).words) {
      for (const auto& label : word) {
        ++counts[label];
        ++total;
      }
    }
  }
  if (total == 0) throw Error(ErrorCode::EmptyCorpus, "no phones in the given texts");
  PhonemeDistribution dist;
  dist.total_phones = total;
  for (const auto& [label, n] : counts) {
    dist.frequency[label] = static_cast<double>(n) / static_cast<double>(total);
  }
  return dist;
}

void write_distribution(std::ostream& out, const PhonemeDistribution& dist) {
  for (const auto& [label, f] : dist.sorted()) {
    out << label << '\t' << std::setprecision(10) << f << '\n';
  }
}

void write_distribution(const std::filesystem::path& path, const PhonemeDistribution& dist) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  write_distribution(out, dist);
}

}  // namespace ruslan::phon
