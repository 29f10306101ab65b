#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ruslan/error.hpp"
#include "ruslan/phonemics.hpp"
#include "ruslan/utf8.hpp"

using namespace ruslan;
using namespace ruslan::phon;

namespace {

std::string charset_string(std::mt19937_64& rng, std::size_t max_len) {
  const auto& symbols = text::Charset::standard().symbols();
  std::u32string out;
  const std::size_t len = rng() % (max_len + 1);
  for (std::size_t i = 0; i < len; ++i) {
    // Bias toward letters so that words are long enough to be interesting.
    if (rng() % 5 == 0) {
      out.push_back(symbols[rng() % symbols.size()]);
    } else {
      out.push_back(symbols[33 + rng() % 33]);
    }
  }
  return utf8::encode(out);
}

}  // namespace

TEST_CASE("inventory") {
  const auto& inv = PhonemeInventory::standard();
  CHECK(inv.size() == 42);
  int vowels = 0;
  for (const auto& l : inv.labels()) vowels += inv.class_of(l) == PhoneClass::Vowel ? 1 : 0;
  CHECK(vowels == 7);
  CHECK(inv.contains("tʲ"));
  CHECK_FALSE(inv.contains("xʲ"));
}

TEST_CASE("transcribe rule examples") {
  CHECK(transcribe("год").to_string() == "g o t");
  CHECK(transcribe("а").to_string() == "a");
  CHECK(transcribe("сдать").to_string() == "z d a tʲ");
  CHECK(transcribe("Да, да!").to_string() == "d a | d a");
  CHECK(transcribe("вход").to_string() == "f x o t");
  CHECK(transcribe("юг").to_string() == "j u k");
  CHECK(transcribe("ёж").to_string() == "j o ʂ");
  CHECK(transcribe("семья").to_string() == "sʲ e mʲ j i");
  CHECK(transcribe("семья́").to_string() == "sʲ i mʲ j a");
  CHECK(transcribe("жизнь").to_string() == "ʐ ɨ z nʲ");
  CHECK(transcribe("молоко").to_string() == "m o l ə k ə");
  CHECK(transcribe("молоко́").to_string() == "m ə l a k o");
  CHECK(transcribe("пятно́").to_string() == "pʲ i t n o");
  CHECK(transcribe("").words.empty());
}

TEST_CASE("transcribe rejects unnormalized text") {
  try {
    transcribe("год 7");
    FAIL("expected NotNormalized");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotNormalized);
  }
}

TEST_CASE("fuzz: labels in inventory, no word-final voiced obstruent") {
  std::mt19937_64 rng(3);
  const auto& inv = PhonemeInventory::standard();
  for (int i = 0; i < 5000; ++i) {
    const auto ps = transcribe(charset_string(rng, 30));
    for (const auto& word : ps.words) {
      REQUIRE_FALSE(word.empty());
      for (const auto& l : word) CHECK(inv.contains(l));
      CHECK_FALSE(is_voiced_obstruent(word.back()));
    }
  }
}

TEST_CASE("phoneme_distribution") {
  const std::vector<std::string> single = {"а"};
  const auto d1 = phoneme_distribution(single);
  CHECK(d1.frequency.size() == 1);
  CHECK(d1.frequency.at("a") == 1.0);

  const std::vector<std::string> dada = {"да", "да"};
  const auto d2 = phoneme_distribution(dada);
  CHECK(d2.total_phones == 4);
  CHECK(d2.frequency.at("d") == 0.5);
  CHECK(d2.frequency.at("a") == 0.5);

  const std::vector<std::string> empty = {"", " , "};
  CHECK_THROWS_AS(phoneme_distribution(empty), Error);

  SUBCASE("sums to one with vowel mass strictly inside (0,1)") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::string> corpus;
      for (int k = 0; k < 20; ++k) corpus.push_back(charset_string(rng, 50));
      corpus.push_back("мама");
      const auto d = phoneme_distribution(corpus);
      double sum = 0.0;
      for (const auto& [l, f] : d.frequency) sum += f;
      CHECK(std::abs(sum - 1.0) <= 1e-9);
      CHECK(d.vowel_mass() > 0.0);
      CHECK(d.vowel_mass() < 1.0);
    }
  }

  SUBCASE("export sorted by frequency") {
    const std::vector<std::string> texts = {"мама мыла раму"};
    std::ostringstream out;
    write_distribution(out, phoneme_distribution(texts));
    std::istringstream in(out.str());
    std::string label;
    double prev = 2.0, f = 0.0;
    int lines = 0;
    while (in >> label >> f) {
      CHECK(f <= prev);
      prev = f;
      ++lines;
    }
    CHECK(lines > 3);
  }
}
