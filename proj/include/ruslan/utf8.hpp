#pragma once

#include <string>
#include <string_view>

namespace ruslan::utf8 {

inline constexpr char32_t kReplacement = U'�';

/// Decodes UTF-8; malformed sequences become U+FFFD.
std::u32string decode(std::string_view bytes);

std::string encode(std::u32string_view text);
std::string encode(char32_t cp);

}  // namespace ruslan::utf8
