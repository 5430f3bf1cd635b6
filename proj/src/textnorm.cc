#include "coordrank/textnorm.h"

#include <algorithm>
#include <regex>

#include "coordrank/porter_stemmer.h"

namespace coordrank {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Bytes of multi-byte UTF-8 sequences count as word characters.
bool is_word_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return (u >= 'a' && u <= 'z') || (u >= '0' && u <= '9') || u >= 0x80;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return c >= 'a' && c <= 'z'; }

constexpr std::string_view kLeadingTrim = "([{<\"'`";
constexpr std::string_view kTrailingTrim = ".,;:!?)]}>\"'`";

struct Category {
  std::string_view token;
  std::regex pattern;
};

// Precedence is the vector order.
const std::vector<Category>& categories() {
  static const std::vector<Category> kCategories = [] {
    constexpr auto flags = std::regex::ECMAScript | std::regex::optimize;
    std::vector<Category> c;
    c.push_back({kUrlToken,
                 std::regex(R"((?:[a-z][a-z0-9+.\-]*://|www\.)\S+)", flags)});
    c.push_back(
        {kAddressToken,
         std::regex(R"((?:\d{1,3}(?:\.\d{1,3}){3}(?::\d{1,5})?)|(?:[a-z][a-z0-9\-]*(?:\.[a-z0-9\-]+)*:\d{1,5}))",
                    flags)});
    c.push_back({kPathToken,
                 std::regex(R"((?:~/\S*)|(?:/?[^/\s]+(?:/[^/\s]+)+/?))", flags)});
    c.push_back(
        {kExtToken,
         std::regex(
             R"([a-z0-9_\-][a-z0-9_.+\-]*\.(?:txt|deb|rpm|sh|bash|conf|cfg|ini|log|tar|gz|tgz|bz|xz|zip|rar|iso|img|py|pl|rb|js|css|html|htm|xml|json|yaml|yml|c|h|cc|cpp|hpp|java|jar|so|ko|pc|list|run|bin|exe|dll|avi|mkv|mov|ogg|wav|flac|png|jpg|jpeg|gif|svg|bmp|pdf|doc|docx|odt|xls|csv|ppt|patch|diff|sql|db|lock|pid|tmp|bak|old|md|rst|tex))",
             flags)});
    c.push_back({kNumberToken, std::regex(R"([+\-]?\d+(?:[.,:]\d+)*)", flags)});
    return c;
  }();
  return kCategories;
}

// Cheap pre-check: a core made only of letters/digits with at least one
// letter cannot match any category pattern.
bool may_be_category(std::string_view core) {
  bool has_letter = false;
  for (char c : core) {
    if (is_alpha(c) || static_cast<unsigned char>(c) >= 0x80)
      has_letter = true;
    else if (!is_digit(c))
      return true;
  }
  return !has_letter;
}

// Longer chunks are never abstracted; libstdc++ regex matching recurses per
// character.
constexpr std::size_t kMaxCategoryLength = 1024;

std::string_view classify(std::string_view core) {
  if (core.size() > kMaxCategoryLength || !may_be_category(core)) return {};
  for (const auto& category : categories())
    if (std::regex_match(core.begin(), core.end(), category.pattern))
      return category.token;
  return {};
}

std::string_view trim_chunk(std::string_view chunk) {
  while (!chunk.empty() && kLeadingTrim.find(chunk.front()) != std::string_view::npos)
    chunk.remove_prefix(1);
  while (!chunk.empty() && kTrailingTrim.find(chunk.back()) != std::string_view::npos)
    chunk.remove_suffix(1);
  return chunk;
}

void emit_word(std::string_view piece, const NormalizeOptions& options,
               std::vector<std::string>& out) {
  if (std::all_of(piece.begin(), piece.end(), is_digit)) {
    out.emplace_back(kNumberToken);
    return;
  }
  if (options.stem && std::all_of(piece.begin(), piece.end(), is_alpha)) {
    std::string stem = porter_stem(piece);
    // Porter maps a lone "s" to the empty string; keep the surface form.
    out.push_back(stem.empty() ? std::string(piece) : std::move(stem));
    return;
  }
  out.emplace_back(piece);
}

void normalize_chunk(std::string_view chunk, const NormalizeOptions& options,
                     std::vector<std::string>& out) {
  if (is_category_token(chunk)) {
    out.emplace_back(chunk);
    return;
  }
  if (std::none_of(chunk.begin(), chunk.end(), is_word_char)) {
    out.emplace_back(kSymbolToken);
    return;
  }
  std::string_view core = trim_chunk(chunk);
  if (!core.empty()) {
    std::string_view category = classify(core);
    if (!category.empty()) {
      out.emplace_back(category);
      return;
    }
  }
  std::size_t i = 0;
  while (i < chunk.size()) {
    if (!is_word_char(chunk[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < chunk.size() && is_word_char(chunk[j])) ++j;
    emit_word(chunk.substr(i, j - i), options, out);
    i = j;
  }
}

}  // namespace

bool is_category_token(std::string_view token) {
  return token == kUrlToken || token == kPathToken || token == kSymbolToken ||
         token == kExtToken || token == kNumberToken || token == kAddressToken;
}

std::vector<std::string> normalize(std::string_view text,
                                   const NormalizeOptions& options) {
  std::string lowered(text);
  for (char& c : lowered)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');

  std::vector<std::string> tokens;
  std::string_view rest(lowered);
  while (!rest.empty()) {
    std::size_t start = 0;
    while (start < rest.size() && is_space(rest[start])) ++start;
    std::size_t end = start;
    while (end < rest.size() && !is_space(rest[end])) ++end;
    if (end > start) normalize_chunk(rest.substr(start, end - start), options, tokens);
    rest.remove_prefix(end);
  }
  return tokens;
}

std::string render_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

}  // namespace coordrank
