#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ruslan::text {

inline constexpr std::size_t kCharsetSize = 78;

bool is_cyrillic_letter(char32_t c) noexcept;
bool is_cyrillic_upper(char32_t c) noexcept;
char32_t to_lower(char32_t c) noexcept;
std::u32string to_lower(std::u32string_view s);

/// Ordered alphabet used for text encoding. Index order is embedding row order.
///
/// The standard set is the 33 upper-case letters (А..Я with Ё after Е), the same
/// 33 in lower case, the space, the ten marks ' , - ( ) . : ; ! ? and the em-dash.
class Charset {
 public:
  static const Charset& standard();

  /// Reads one symbol per line (UTF-8). Throws InvalidArgument when the file
  /// breaks the size/uniqueness/alphabet invariants.
  static Charset load(const std::filesystem::path& path);

  /// Writes the one-symbol-per-line file format.
  void save(const std::filesystem::path& path) const;

  explicit Charset(std::vector<char32_t> symbols);

  std::size_t size() const noexcept { return symbols_.size(); }
  bool contains(char32_t c) const noexcept { return index_of(c).has_value(); }
  std::optional<int> index_of(char32_t c) const noexcept;
  char32_t symbol(std::size_t index) const { return symbols_.at(index); }
  const std::vector<char32_t>& symbols() const noexcept { return symbols_; }

 private:
  std::vector<char32_t> symbols_;
};

}  // namespace ruslan::text
