#include "coordrank/filter_lists.h"

#include <fstream>
#include <sstream>

#include "builtin_lists.h"
#include "coordrank/errors.h"
#include "coordrank/textnorm.h"

namespace coordrank {

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

FilterListFile parse_text(std::string_view text, std::string_view name) {
  std::istringstream in{std::string(text)};
  return read_filter_list(in, name);
}

}  // namespace

bool FilterLists::contains(std::string_view marker) const {
  return stopwords.contains(marker) || interjections.contains(marker) ||
         number_words.contains(marker) || common_words.contains(marker);
}

MarkerSet marker_types(std::span<const std::string> tokens,
                       const FilterLists& filters) {
  MarkerSet out;
  for (const auto& token : tokens)
    if (!is_category_token(token) && !filters.contains(token)) out.insert(token);
  return out;
}

FilterListFile read_filter_list(std::istream& in, std::string_view name) {
  FilterListFile result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view entry(line);
    if (auto hash = entry.find('#'); hash != std::string_view::npos)
      entry = entry.substr(0, hash);
    entry = strip(entry);
    if (entry.empty()) continue;
    auto tokens = normalize(entry);
    bool stored = false;
    for (auto& t : tokens)
      if (!is_category_token(t)) {
        result.markers.insert(std::move(t));
        stored = true;
      }
    if (!stored)
      result.warnings.push_back(std::string(name) + ":" + std::to_string(line_no) +
                                ": \"" + std::string(entry) +
                                "\" normalizes to no filterable marker (\"" +
                                render_tokens(tokens) + "\")");
  }
  return result;
}

FilterListFile load_filter_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open filter list " + path.string());
  return read_filter_list(in, path.string());
}

FilterLists builtin_filter_lists() {
  static const FilterLists kLists = [] {
    FilterLists lists;
    lists.stopwords = parse_text(builtin::stopwords_text(), "stopwords").markers;
    lists.interjections =
        parse_text(builtin::interjections_text(), "interjections").markers;
    lists.number_words =
        parse_text(builtin::number_words_text(), "number_words").markers;
    return lists;
  }();
  return kLists;
}

}  // namespace coordrank
