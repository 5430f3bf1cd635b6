#pragma once

// Text normalization into marker tokens.
//
// Pipeline (fixed order):
//   1. ASCII lowercase.
//   2. Category abstraction per whitespace-delimited chunk, precedence
//      url > address > path > ext > number > symbol.
//   3. Tokenization on punctuation; category tokens stay intact and
//      digit-only pieces become <number>.
//   4. Porter stemming of purely alphabetic tokens.

#include <string>
#include <string_view>
#include <vector>

namespace coordrank {

inline constexpr std::string_view kUrlToken = "<url>";
inline constexpr std::string_view kPathToken = "<path>";
inline constexpr std::string_view kSymbolToken = "<symbol>";
inline constexpr std::string_view kExtToken = "<ext>";
inline constexpr std::string_view kNumberToken = "<number>";
inline constexpr std::string_view kAddressToken = "<address>";

bool is_category_token(std::string_view token);

struct NormalizeOptions {
  bool stem = true;
};

std::vector<std::string> normalize(std::string_view text,
                                   const NormalizeOptions& options = {});

// Tokens joined by single spaces.
std::string render_tokens(const std::vector<std::string>& tokens);

}  // namespace coordrank
