#include <doctest.h>

#include <random>
#include <set>

#include "ruslan/textnorm.hpp"
#include "ruslan/utf8.hpp"
#include "support/golden.hpp"
#include "support/random_text.hpp"

using namespace ruslan;
using namespace ruslan::text;

namespace {

const AcronymLexicon& fixture_lexicon() {
  static const AcronymLexicon lexicon = AcronymLexicon::load(RUSLAN_TEST_DIR "/fixtures/acronyms.tsv");
  return lexicon;
}

bool charset_only(const std::string& s) {
  for (char32_t c : utf8::decode(s)) {
    if (!Charset::standard().contains(c)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("charset has the documented 78 symbols") {
  const auto& cs = Charset::standard();
  CHECK(cs.size() == 78);
  CHECK(cs.index_of(U'А') == 0);
  CHECK(cs.index_of(U'Ё') == 6);
  CHECK(cs.index_of(U'а') == 33);
  CHECK(cs.index_of(U' ') == 66);
  CHECK(cs.index_of(U'—') == 77);
  int letters = 0;
  for (char32_t c : cs.symbols()) letters += is_cyrillic_letter(c) ? 1 : 0;
  CHECK(letters == 66);
  for (std::size_t i = 0; i < cs.size(); ++i) CHECK(cs.index_of(cs.symbol(i)) == static_cast<int>(i));
  CHECK_FALSE(cs.contains(U'7'));
  CHECK_FALSE(cs.contains(U'a'));
}

TEST_CASE("shipped charset file matches the built-in charset") {
  const auto loaded = Charset::load(RUSLAN_DATA_DIR "/charset.txt");
  CHECK(loaded.symbols() == Charset::standard().symbols());
}

TEST_CASE("charset rejects bad inventories") {
  auto symbols = Charset::standard().symbols();
  symbols.pop_back();
  CHECK_THROWS_AS(Charset{symbols}, Error);
  symbols.push_back(U'а');
  CHECK_THROWS_AS(Charset{symbols}, Error);
}

TEST_CASE("number_to_words") {
  CHECK(number_to_words(0) == "ноль");
  CHECK(number_to_words(5) == "пять");
  CHECK(number_to_words(1234) == "тысяча двести тридцать четыре");
  CHECK(number_to_words(-21) == "минус двадцать один");
  CHECK(number_to_words(2, {Case::Nominative, Gender::Feminine}) == "две");
  CHECK(number_to_words(21000, {Case::Instrumental, Gender::Masculine}) == "двадцатью одной тысячей");
  CHECK(number_to_words(kMaxVerbalized).rfind("девятьсот девяносто девять миллиардов", 0) == 0);

  SUBCASE("out of range") {
    try {
      number_to_words(1'000'000'000'000);
      FAIL("expected OutOfRange");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::OutOfRange);
    }
    CHECK_THROWS_AS(number_to_words(-1'000'000'000'000), Error);
  }

  SUBCASE("injective below 1000 for every context") {
    for (int c = 0; c < 6; ++c) {
      for (int g = 0; g < 3; ++g) {
        std::set<std::string> seen;
        for (int n = 0; n < 1000; ++n) {
          const auto words = number_to_words(n, {static_cast<Case>(c), static_cast<Gender>(g)});
          CHECK(charset_only(words));
          seen.insert(words);
        }
        CHECK(seen.size() == 1000);
      }
    }
  }
}

TEST_CASE("ordinals") {
  CHECK(ordinal_to_words(0) == "нулевой");
  CHECK(ordinal_to_words(3, {Case::Genitive, Gender::Feminine}) == "третьей");
  CHECK(ordinal_to_words(2000, {Case::Genitive, Gender::Masculine}) == "двухтысячного");
  CHECK(ordinal_to_words(21000) == "двадцатиоднотысячный");
  CHECK(ordinal_to_words(100000) == "стотысячный");
  CHECK(ordinal_to_words(3'000'000) == "трёхмиллионный");
  CHECK_THROWS_AS(ordinal_to_words(-1), Error);
}

TEST_CASE("date_to_words") {
  CHECK(date_to_words(9, 5, 1945) == "девятое мая тысяча девятьсот сорок пятого года");
  CHECK(date_to_words(1, 1, 1) == "первое января первого года");
  CHECK(date_to_words(29, 2, 2000) == "двадцать девятое февраля двухтысячного года");
  for (auto [d, m, y] : {std::tuple{31, 2, 2000}, {29, 2, 1900}, {31, 4, 2020}, {0, 1, 2000}, {1, 13, 2000},
                         {1, 1, 0}, {1, 1, 10000}}) {
    try {
      date_to_words(d, m, y);
      FAIL("expected InvalidDate");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidDate);
    }
  }
}

TEST_CASE("expand_acronyms") {
  const auto& lex = fixture_lexicon();
  CHECK(expand_acronyms("СССР", lex) == "эс эс эс эр");
  CHECK(expand_acronyms("ВУЗ и ВУЗы", lex) == "вуз и ВУЗы");
  CHECK(expand_acronyms("обычный текст без заглавных", lex) == "обычный текст без заглавных");
  CHECK(expand_acronyms("ЦРУ", lex) == "ЦРУ");

  SUBCASE("never introduces symbols outside charset and input") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
      const auto input = ruslan::testing::random_text(rng) + (i % 3 == 0 ? " СССР" : "");
      const auto in_cps = utf8::decode(input);
      const std::set<char32_t> allowed(in_cps.begin(), in_cps.end());
      for (char32_t c : utf8::decode(expand_acronyms(input, lex))) {
        CHECK((allowed.count(c) || Charset::standard().contains(c)));
      }
    }
  }
}

TEST_CASE("acronym lexicon validation") {
  CHECK_THROWS_AS(AcronymLexicon::parse("СССР эс эс эс эр\n"), Error);  // no tab
  CHECK_THROWS_AS(AcronymLexicon::parse("С\tэс\n"), Error);             // too short
  CHECK_THROWS_AS(AcronymLexicon::parse("ВУЗ\tвуз 7\n"), Error);        // non-charset expansion
  CHECK_THROWS_AS(AcronymLexicon::parse("АБ\tВГ\nВГ\tвэ гэ\n"), Error); // expansion holds a key
  const auto lex = AcronymLexicon::parse("# comment\n\nАБ\tа бэ\r\n");
  CHECK(lex.size() == 1);
}

TEST_CASE("filter_charset") {
  CHECK(filter_charset("Привет, мир! 😊") == "Привет, мир!");
  CHECK(filter_charset("Уже нормальный текст.") == "Уже нормальный текст.");
  CHECK(filter_charset("abc123") == "");
  CHECK(filter_charset("  а \t\n б  ") == "а б");

  SUBCASE("output alphabet is a subset of the charset") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 5000; ++i) {
      const auto out = filter_charset(ruslan::testing::random_text(rng));
      CHECK(charset_only(out));
      CHECK(out.find("  ") == std::string::npos);
      if (!out.empty()) {
        CHECK(out.front() != ' ');
        CHECK(out.back() != ' ');
      }
    }
  }
}

TEST_CASE("normalize") {
  const auto& lex = fixture_lexicon();
  CHECK(normalize("5 мая", lex) == "пятого мая");
  CHECK(normalize("Б/У товар", lex) == "БУ товар");
  CHECK(normalize("Это было 09.05.1945.", lex) == "Это было девятое мая тысяча девятьсот сорок пятого года.");

  SUBCASE("errors carry the source span") {
    try {
      normalize("дата 31.02.2000 неверна", lex);
      FAIL("expected InvalidDate");
    } catch (const SpanError& e) {
      CHECK(e.code() == ErrorCode::InvalidDate);
      CHECK(e.begin() == std::string("дата ").size());
      CHECK(e.end() == e.begin() + 10);
    }
    try {
      normalize("x 1234567890123", lex);
      FAIL("expected OutOfRange");
    } catch (const SpanError& e) {
      CHECK(e.code() == ErrorCode::OutOfRange);
      CHECK(e.begin() == 2);
      CHECK(e.end() == 15);
    }
  }

  SUBCASE("deletion that forms a key is resolved in one call") {
    CHECK(normalize("СС/СР", lex) == "эс эс эс эр");
  }

  SUBCASE("idempotent on random input") {
    std::mt19937_64 rng(2024);
    std::vector<std::string> keys;
    for (const auto& [key, expansion] : lex.entries()) keys.push_back(ruslan::utf8::encode(key));
    int normalized = 0, rejected = 0;
    for (int i = 0; i < 10000; ++i) {
      std::string input = ruslan::testing::random_text(rng);
      if (rng() % 4 == 0) input += " " + keys[rng() % keys.size()] + (rng() % 2 ? "/" : " ") + ruslan::testing::random_text(rng, 8);
      std::string once;
      try {
        once = normalize(input, lex);
      } catch (const SpanError&) {
        ++rejected;
        continue;
      }
      ++normalized;
      CAPTURE(input);
      CHECK(normalize(once, lex) == once);
    }
    MESSAGE(normalized << " normalized, " << rejected << " rejected");
    CHECK(normalized > 5000);
  }
}

TEST_CASE("golden normalization table") {
  const auto rows = ruslan::testing::load_golden(RUSLAN_TEST_DIR "/golden/normalization.tsv");
  REQUIRE(rows.size() >= 200);
  for (const auto& row : rows) {
    CAPTURE(row.kind);
    CAPTURE(row.input);
    const MorphContext ctx{static_cast<Case>(row.grammatical_case), static_cast<Gender>(row.gender)};
    std::string got;
    if (row.kind == "cardinal") {
      got = number_to_words(std::stoll(row.input), ctx);
    } else if (row.kind == "ordinal") {
      got = ordinal_to_words(std::stoll(row.input), ctx);
    } else if (row.kind == "date") {
      got = date_to_words(std::stoi(row.input.substr(0, 2)), std::stoi(row.input.substr(3, 2)),
                          std::stoi(row.input.substr(6)));
    } else {
      got = normalize(row.input, fixture_lexicon());
    }
    CHECK(got == row.expected);
  }
}
