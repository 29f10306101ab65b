#include "ruslan/charset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "ruslan/error.hpp"
#include "ruslan/utf8.hpp"

namespace ruslan::text {

namespace {

constexpr char32_t kUpperYo = U'Ё';
constexpr char32_t kLowerYo = U'ё';

constexpr std::u32string_view kMarks = U"',-().:;!?—";

std::vector<char32_t> standard_symbols() {
  std::vector<char32_t> out;
  out.reserve(kCharsetSize);
  auto push_case = [&out](char32_t first, char32_t yo) {
    for (char32_t c = first; c < first + 32; ++c) {
      out.push_back(c);
      if (c == first + 5) out.push_back(yo);  // Ё follows Е
    }
  };
  push_case(U'А', kUpperYo);
  push_case(U'а', kLowerYo);
  out.push_back(U' ');
  for (char32_t c : kMarks) out.push_back(c);
  return out;
}

}  // namespace

bool is_cyrillic_letter(char32_t c) noexcept {
  return (c >= U'А' && c <= U'я') || c == kUpperYo || c == kLowerYo;
}

bool is_cyrillic_upper(char32_t c) noexcept {
  return (c >= U'А' && c <= U'Я') || c == kUpperYo;
}

char32_t to_lower(char32_t c) noexcept {
  if (c >= U'А' && c <= U'Я') return c + 0x20;
  if (c == kUpperYo) return kLowerYo;
  return c;
}

std::u32string to_lower(std::u32string_view s) {
  std::u32string out(s);
  for (auto& c : out) c = to_lower(c);
  return out;
}

Charset::Charset(std::vector<char32_t> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.size() != kCharsetSize) {
    throw Error(ErrorCode::InvalidArgument,
                "charset must contain " + std::to_string(kCharsetSize) + " symbols, got " +
                    std::to_string(symbols_.size()));
  }
  std::unordered_set<char32_t> seen;
  for (char32_t c : symbols_) {
    if (!seen.insert(c).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate charset symbol " + utf8::encode(c));
    }
  }
  for (char32_t c : standard_symbols()) {
    if (c == U'—') continue;  // the 78th symbol is the only free slot
    if (!seen.count(c)) {
      throw Error(ErrorCode::InvalidArgument, "charset lacks required symbol " + utf8::encode(c));
    }
  }
}

const Charset& Charset::standard() {
  static const Charset kStandard(standard_symbols());
  return kStandard;
}

std::optional<int> Charset::index_of(char32_t c) const noexcept {
  const auto it = std::find(symbols_.begin(), symbols_.end(), c);
  if (it == symbols_.end()) return std::nullopt;
  return static_cast<int>(it - symbols_.begin());
}

Charset Charset::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open charset file " + path.string());
  std::vector<char32_t> symbols;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cps = utf8::decode(line);
    if (cps.size() != 1) {
      throw Error(ErrorCode::InvalidArgument, "charset line must hold exactly one symbol: '" + line + "'");
    }
    symbols.push_back(cps.front());
  }
  return Charset(std::move(symbols));
}

void Charset::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  for (char32_t c : symbols_) out << utf8::encode(c) << '\n';
}

}  // namespace ruslan::text
