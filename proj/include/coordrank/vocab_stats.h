#pragma once

// Corpus-level marker statistics.
//
// count_total[m] counts occurrences of m anywhere in the statistics corpus
// (context utterances and responses); count_response[m] counts occurrences on
// the response side only (candidate texts and extra responses). The
// rarity-weighted response probability used by coordination is
//
//   P(m) = (count_response[m] + alpha) / (count_total[m] + alpha)
//
// so a marker never seen in the corpus gets P = 1.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "coordrank/filter_lists.h"
#include "coordrank/types.h"

namespace coordrank {

struct VocabStats {
  std::unordered_map<Marker, std::uint64_t> count_total;
  std::unordered_map<Marker, std::uint64_t> count_response;
  std::uint64_t total_tokens = 0;
  // Keys of count_total by descending count, ties lexicographic.
  std::vector<Marker> freq_rank;

  std::uint64_t total(std::string_view marker) const;
  std::uint64_t response(std::string_view marker) const;

  bool operator==(const VocabStats&) const = default;
};

// Additional response-side texts for one dialogue (e.g. a first-pass model's
// 10-best candidates).
struct ExtraResponses {
  std::string dialogue_id;
  std::vector<std::string> texts;
};

// Throws DataError when the statistics corpus holds no countable token.
VocabStats build_stats(std::span<const Dialogue> dialogues,
                       std::span<const ExtraResponses> extra_responses = {},
                       unsigned threads = 1);

// Adds `other`'s counts to `into`; freq_rank is recomputed.
void merge_stats(VocabStats& into, const VocabStats& other);

// Rebuilds freq_rank from count_total.
void rank_by_frequency(VocabStats& stats);

// First min(n, |freq_rank|) markers of freq_rank.
MarkerSet common_words(const VocabStats& stats, std::size_t n);

double response_probability(const VocabStats& stats, std::string_view marker,
                            double alpha);

// Throws DataError on any violated invariant.
void validate_stats(const VocabStats& stats);

// Versioned text snapshot.
void write_stats(const VocabStats& stats, std::ostream& out);
void save_stats(const VocabStats& stats, const std::filesystem::path& path);
VocabStats read_stats(std::istream& in);
VocabStats load_stats(const std::filesystem::path& path);

// Reads `dialogue_id<TAB>text` rows.
std::vector<ExtraResponses> load_extra_responses(
    const std::filesystem::path& path);

}  // namespace coordrank
