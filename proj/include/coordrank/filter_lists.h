#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coordrank {

using Marker = std::string;
using MarkerSet = std::set<Marker, std::less<>>;

// Markers ignored for coordination. The effective ignore set is the union of
// all four lists.
struct FilterLists {
  MarkerSet stopwords;
  MarkerSet interjections;
  MarkerSet number_words;
  MarkerSet common_words;  // top-N by statistics-corpus frequency

  bool contains(std::string_view marker) const;
  bool operator==(const FilterLists&) const = default;
};

// Distinct markers of `tokens` that are neither category tokens nor filtered.
MarkerSet marker_types(std::span<const std::string> tokens,
                       const FilterLists& filters);

struct FilterListFile {
  MarkerSet markers;
  std::vector<std::string> warnings;  // entries that filter nothing
};

// One surface form per line, '#' starts a comment. Entries are normalized on
// load; an entry that leaves no lexical marker produces a warning.
FilterListFile read_filter_list(std::istream& in, std::string_view name);
FilterListFile load_filter_list(const std::filesystem::path& path);

// Stopword, interjection and number-word lists bundled with the library.
// common_words is left empty; it depends on the statistics corpus.
FilterLists builtin_filter_lists();

}  // namespace coordrank
