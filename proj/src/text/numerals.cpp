// Russian numeral inflection.
//
// Rule table (all forms below are spelled out in the tables of this file):
//  * Cardinals decline every component in the requested case. Only 1 and 2
//    carry gender; the thousands group is feminine, millions and billions
//    are masculine. Accusative uses the inanimate paradigm.
//  * A group equal to exactly 1 in front of a scale noun is omitted
//    ("тысяча", "миллион").
//  * Scale noun agreement: nominative/accusative -> ...1 (not 11) singular of
//    the case, ...2-4 (not 12-14) genitive singular, otherwise genitive plural;
//    oblique cases -> ...1 (not 11) singular, otherwise plural, in that case.
//  * Ordinals inflect only the last word; preceding words stay nominative
//    cardinals. A number ending in a whole scale (2000, 300000) becomes one
//    compound adjective whose prefix is the genitive of the multiplier with
//    один -> одно, сто and девяносто unchanged ("двухтысячный",
//    "стотысячный").

#include <array>
#include <string>
#include <vector>

#include "ruslan/textnorm.hpp"

namespace ruslan::text {

namespace {

using Forms = std::array<const char*, 6>;  // nom gen dat acc ins prep

constexpr Forms kZero = {"ноль", "ноля", "нолю", "ноль", "нолём", "ноле"};

constexpr Forms kOneMasc = {"один", "одного", "одному", "один", "одним", "одном"};
constexpr Forms kOneFem = {"одна", "одной", "одной", "одну", "одной", "одной"};
constexpr Forms kOneNeut = {"одно", "одного", "одному", "одно", "одним", "одном"};
constexpr Forms kTwoMascNeut = {"два", "двух", "двум", "два", "двумя", "двух"};
constexpr Forms kTwoFem = {"две", "двух", "двум", "две", "двумя", "двух"};

// 3..19
constexpr std::array<Forms, 17> kUnitsFrom3 = {{
    {"три", "трёх", "трём", "три", "тремя", "трёх"},
    {"четыре", "четырёх", "четырём", "четыре", "четырьмя", "четырёх"},
    {"пять", "пяти", "пяти", "пять", "пятью", "пяти"},
    {"шесть", "шести", "шести", "шесть", "шестью", "шести"},
    {"семь", "семи", "семи", "семь", "семью", "семи"},
    {"восемь", "восьми", "восьми", "восемь", "восемью", "восьми"},
    {"девять", "девяти", "девяти", "девять", "девятью", "девяти"},
    {"десять", "десяти", "десяти", "десять", "десятью", "десяти"},
    {"одиннадцать", "одиннадцати", "одиннадцати", "одиннадцать", "одиннадцатью", "одиннадцати"},
    {"двенадцать", "двенадцати", "двенадцати", "двенадцать", "двенадцатью", "двенадцати"},
    {"тринадцать", "тринадцати", "тринадцати", "тринадцать", "тринадцатью", "тринадцати"},
    {"четырнадцать", "четырнадцати", "четырнадцати", "четырнадцать", "четырнадцатью", "четырнадцати"},
    {"пятнадцать", "пятнадцати", "пятнадцати", "пятнадцать", "пятнадцатью", "пятнадцати"},
    {"шестнадцать", "шестнадцати", "шестнадцати", "шестнадцать", "шестнадцатью", "шестнадцати"},
    {"семнадцать", "семнадцати", "семнадцати", "семнадцать", "семнадцатью", "семнадцати"},
    {"восемнадцать", "восемнадцати", "восемнадцати", "восемнадцать", "восемнадцатью", "восемнадцати"},
    {"девятнадцать", "девятнадцати", "девятнадцати", "девятнадцать", "девятнадцатью", "девятнадцати"},
}};

// 20..90
constexpr std::array<Forms, 8> kTens = {{
    {"двадцать", "двадцати", "двадцати", "двадцать", "двадцатью", "двадцати"},
    {"тридцать", "тридцати", "тридцати", "тридцать", "тридцатью", "тридцати"},
    {"сорок", "сорока", "сорока", "сорок", "сорока", "сорока"},
    {"пятьдесят", "пятидесяти", "пятидесяти", "пятьдесят", "пятьюдесятью", "пятидесяти"},
    {"шестьдесят", "шестидесяти", "шестидесяти", "шестьдесят", "шестьюдесятью", "шестидесяти"},
    {"семьдесят", "семидесяти", "семидесяти", "семьдесят", "семьюдесятью", "семидесяти"},
    {"восемьдесят", "восьмидесяти", "восьмидесяти", "восемьдесят", "восемьюдесятью", "восьмидесяти"},
    {"девяносто", "девяноста", "девяноста", "девяносто", "девяноста", "девяноста"},
}};

// 100..900
constexpr std::array<Forms, 9> kHundreds = {{
    {"сто", "ста", "ста", "сто", "ста", "ста"},
    {"двести", "двухсот", "двумстам", "двести", "двумястами", "двухстах"},
    {"триста", "трёхсот", "трёмстам", "триста", "тремястами", "трёхстах"},
    {"четыреста", "четырёхсот", "четырёмстам", "четыреста", "четырьмястами", "четырёхстах"},
    {"пятьсот", "пятисот", "пятистам", "пятьсот", "пятьюстами", "пятистах"},
    {"шестьсот", "шестисот", "шестистам", "шестьсот", "шестьюстами", "шестистах"},
    {"семьсот", "семисот", "семистам", "семьсот", "семьюстами", "семистах"},
    {"восемьсот", "восьмисот", "восьмистам", "восемьсот", "восемьюстами", "восьмистах"},
    {"девятьсот", "девятисот", "девятистам", "девятьсот", "девятьюстами", "девятистах"},
}};

struct ScaleNoun {
  Gender gender;
  Forms singular;
  Forms plural;
};

constexpr std::array<ScaleNoun, 3> kScales = {{
    {Gender::Feminine,
     {"тысяча", "тысячи", "тысяче", "тысячу", "тысячей", "тысяче"},
     {"тысячи", "тысяч", "тысячам", "тысячи", "тысячами", "тысячах"}},
    {Gender::Masculine,
     {"миллион", "миллиона", "миллиону", "миллион", "миллионом", "миллионе"},
     {"миллионы", "миллионов", "миллионам", "миллионы", "миллионами", "миллионах"}},
    {Gender::Masculine,
     {"миллиард", "миллиарда", "миллиарду", "миллиард", "миллиардом", "миллиарде"},
     {"миллиарды", "миллиардов", "миллиардам", "миллиарды", "миллиардами", "миллиардах"}},
}};

constexpr std::array<const char*, 3> kScaleOrdinalStems = {"тысячн", "миллионн", "миллиардн"};

// Adjective declension of ordinals.
enum class AdjType { Hard, HardStressedEnding, Third };

struct OrdinalStem {
  const char* stem;
  AdjType type;
};

constexpr std::array<OrdinalStem, 20> kOrdinalUnits = {{
    {"нулев", AdjType::HardStressedEnding},
    {"перв", AdjType::Hard},
    {"втор", AdjType::HardStressedEnding},
    {"трет", AdjType::Third},
    {"четвёрт", AdjType::Hard},
    {"пят", AdjType::Hard},
    {"шест", AdjType::HardStressedEnding},
    {"седьм", AdjType::HardStressedEnding},
    {"восьм", AdjType::HardStressedEnding},
    {"девят", AdjType::Hard},
    {"десят", AdjType::Hard},
    {"одиннадцат", AdjType::Hard},
    {"двенадцат", AdjType::Hard},
    {"тринадцат", AdjType::Hard},
    {"четырнадцат", AdjType::Hard},
    {"пятнадцат", AdjType::Hard},
    {"шестнадцат", AdjType::Hard},
    {"семнадцат", AdjType::Hard},
    {"восемнадцат", AdjType::Hard},
    {"девятнадцат", AdjType::Hard},
}};

constexpr std::array<OrdinalStem, 8> kOrdinalTens = {{
    {"двадцат", AdjType::Hard},
    {"тридцат", AdjType::Hard},
    {"сороков", AdjType::HardStressedEnding},
    {"пятидесят", AdjType::Hard},
    {"шестидесят", AdjType::Hard},
    {"семидесят", AdjType::Hard},
    {"восьмидесят", AdjType::Hard},
    {"девяност", AdjType::Hard},
}};

constexpr std::array<OrdinalStem, 9> kOrdinalHundreds = {{
    {"сот", AdjType::Hard},
    {"двухсот", AdjType::Hard},
    {"трёхсот", AdjType::Hard},
    {"четырёхсот", AdjType::Hard},
    {"пятисот", AdjType::Hard},
    {"шестисот", AdjType::Hard},
    {"семисот", AdjType::Hard},
    {"восьмисот", AdjType::Hard},
    {"девятисот", AdjType::Hard},
}};

using EndingTable = std::array<Forms, 3>;  // masc fem neut

constexpr EndingTable kHardEndings = {{
    {"ый", "ого", "ому", "ый", "ым", "ом"},
    {"ая", "ой", "ой", "ую", "ой", "ой"},
    {"ое", "ого", "ому", "ое", "ым", "ом"},
}};

constexpr EndingTable kStressedEndings = {{
    {"ой", "ого", "ому", "ой", "ым", "ом"},
    {"ая", "ой", "ой", "ую", "ой", "ой"},
    {"ое", "ого", "ому", "ое", "ым", "ом"},
}};

constexpr EndingTable kThirdEndings = {{
    {"ий", "ьего", "ьему", "ий", "ьим", "ьем"},
    {"ья", "ьей", "ьей", "ью", "ьей", "ьей"},
    {"ье", "ьего", "ьему", "ье", "ьим", "ьем"},
}};

std::size_t idx(Case c) { return static_cast<std::size_t>(c); }
std::size_t idx(Gender g) { return static_cast<std::size_t>(g); }

std::string decline(const char* stem, AdjType type, MorphContext ctx) {
  const EndingTable& table = type == AdjType::Hard                 ? kHardEndings
                             : type == AdjType::HardStressedEnding ? kStressedEndings
                                                                   : kThirdEndings;
  return std::string(stem) + table[idx(ctx.gender)][idx(ctx.grammatical_case)];
}

void append_word(std::string& out, std::string_view word) {
  if (word.empty()) return;
  if (!out.empty()) out.push_back(' ');
  out.append(word);
}

// Words for 1..999 in the given case/gender.
void append_group(std::string& out, int value, Case c, Gender g) {
  const int hundreds = value / 100;
  const int rest = value % 100;
  if (hundreds > 0) append_word(out, kHundreds[hundreds - 1][idx(c)]);
  if (rest >= 20) {
    append_word(out, kTens[rest / 10 - 2][idx(c)]);
  }
  const int units = rest >= 20 ? rest % 10 : rest;
  if (units == 1) {
    const Forms& f = g == Gender::Feminine ? kOneFem : g == Gender::Neuter ? kOneNeut : kOneMasc;
    append_word(out, f[idx(c)]);
  } else if (units == 2) {
    append_word(out, (g == Gender::Feminine ? kTwoFem : kTwoMascNeut)[idx(c)]);
  } else if (units >= 3) {
    append_word(out, kUnitsFrom3[units - 3][idx(c)]);
  }
}

const char* scale_noun_form(const ScaleNoun& noun, int group, Case c) {
  const int last2 = group % 100;
  const int last = group % 10;
  const bool one = last == 1 && last2 != 11;
  const bool few = last >= 2 && last <= 4 && !(last2 >= 12 && last2 <= 14);
  if (c == Case::Nominative || c == Case::Accusative) {
    if (one) return noun.singular[idx(c)];
    if (few) return noun.singular[idx(Case::Genitive)];
    return noun.plural[idx(Case::Genitive)];
  }
  return one ? noun.singular[idx(c)] : noun.plural[idx(c)];
}

std::array<int, 4> split_groups(std::int64_t n) {
  // [units, thousands, millions, billions]
  std::array<int, 4> groups{};
  for (auto& gr : groups) {
    gr = static_cast<int>(n % 1000);
    n /= 1000;
  }
  return groups;
}

// Cardinal wording of the part of n at or above the given scale (scale 0 = whole number).
void append_cardinal_from(std::string& out, const std::array<int, 4>& groups, int lowest_scale, Case c,
                          Gender units_gender) {
  for (int scale = 3; scale >= lowest_scale; --scale) {
    const int group = groups[static_cast<std::size_t>(scale)];
    if (group == 0) continue;
    if (scale == 0) {
      append_group(out, group, c, units_gender);
      continue;
    }
    const ScaleNoun& noun = kScales[static_cast<std::size_t>(scale - 1)];
    if (group != 1) append_group(out, group, c, noun.gender);
    append_word(out, scale_noun_form(noun, group, c));
  }
}

void check_range(std::int64_t n) {
  if (n > kMaxVerbalized || n < -kMaxVerbalized) {
    throw Error(ErrorCode::OutOfRange, std::to_string(n) + " exceeds ±" + std::to_string(kMaxVerbalized));
  }
}

// Genitive prefix for compound ordinals such as двухтысячный.
std::string compound_prefix(int group) {
  if (group == 1) return {};
  std::string out;
  const int hundreds = group / 100;
  const int rest = group % 100;
  if (hundreds == 1) {
    out += "сто";
  } else if (hundreds > 1) {
    out += kHundreds[hundreds - 1][idx(Case::Genitive)];
  }
  if (rest >= 20) {
    out += rest / 10 == 9 ? "девяносто" : kTens[rest / 10 - 2][idx(Case::Genitive)];
  }
  const int units = rest >= 20 ? rest % 10 : rest;
  if (units == 1) {
    out += "одно";
  } else if (units == 2) {
    out += "двух";
  } else if (units >= 3) {
    out += kUnitsFrom3[units - 3][idx(Case::Genitive)];
  }
  return out;
}

}  // namespace

std::string number_to_words(std::int64_t n, MorphContext ctx) {
  check_range(n);
  std::string out;
  if (n < 0) {
    out = "минус";
    n = -n;
  }
  if (n == 0) {
    append_word(out, kZero[idx(ctx.grammatical_case)]);
    return out;
  }
  append_cardinal_from(out, split_groups(n), 0, ctx.grammatical_case, ctx.gender);
  return out;
}

std::string ordinal_to_words(std::int64_t n, MorphContext ctx) {
  if (n < 0) throw Error(ErrorCode::OutOfRange, "ordinals are defined for n >= 0");
  check_range(n);
  if (n == 0) return decline(kOrdinalUnits[0].stem, kOrdinalUnits[0].type, ctx);

  const auto groups = split_groups(n);
  std::string out;
  if (groups[0] != 0) {
    append_cardinal_from(out, groups, 1, Case::Nominative, Gender::Masculine);
    const int value = groups[0];
    const int hundreds = value / 100;
    const int rest = value % 100;
    if (rest == 0) {
      const auto& s = kOrdinalHundreds[static_cast<std::size_t>(hundreds - 1)];
      append_word(out, decline(s.stem, s.type, ctx));
      return out;
    }
    if (hundreds > 0) append_word(out, kHundreds[hundreds - 1][idx(Case::Nominative)]);
    if (rest < 20) {
      const auto& s = kOrdinalUnits[static_cast<std::size_t>(rest)];
      append_word(out, decline(s.stem, s.type, ctx));
    } else if (rest % 10 == 0) {
      const auto& s = kOrdinalTens[static_cast<std::size_t>(rest / 10 - 2)];
      append_word(out, decline(s.stem, s.type, ctx));
    } else {
      append_word(out, kTens[rest / 10 - 2][idx(Case::Nominative)]);
      const auto& s = kOrdinalUnits[static_cast<std::size_t>(rest % 10)];
      append_word(out, decline(s.stem, s.type, ctx));
    }
    return out;
  }

  int scale = 1;
  while (groups[static_cast<std::size_t>(scale)] == 0) ++scale;
  append_cardinal_from(out, groups, scale + 1, Case::Nominative, Gender::Masculine);
  const std::string stem =
      compound_prefix(groups[static_cast<std::size_t>(scale)]) + kScaleOrdinalStems[static_cast<std::size_t>(scale - 1)];
  append_word(out, decline(stem.c_str(), AdjType::Hard, ctx));
  return out;
}

}  // namespace ruslan::text
