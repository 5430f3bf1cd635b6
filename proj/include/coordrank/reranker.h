#pragma once

// Second-pass reranking of N-best lists.
//
// S = w_g * G + w_coor * Coor. Per dialogue:
//   - if the best G exceeds bypass_threshold the baseline order is kept;
//   - otherwise the first top_n baseline candidates are re-sorted by S
//     (stable, so equal S keeps baseline order) and the rest stay frozen
//     below them with S = w_g * G and Coor = 0.
// Bypassed dialogues report S = w_g * G and Coor = 0 for every candidate.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "coordrank/coordination.h"
#include "coordrank/filter_lists.h"
#include "coordrank/types.h"
#include "coordrank/vocab_stats.h"

namespace coordrank {

struct RerankConfig {
  double w_g = 1.0;
  double w_coor = 1.0;
  double k = 1.0;
  double bypass_threshold = 0.99;
  int top_n = 10;
  int common_cutoff = 200;

  // Throws UsageError when a field is outside its domain.
  void validate() const;
  CoordParams coord_params() const { return CoordParams{k, 1.0}; }

  bool operator==(const RerankConfig&) const = default;
};

double fuse(double g, double coor, const RerankConfig& cfg);

struct BaselineCandidate {
  std::size_t index;  // position in Dialogue::candidates
  double g;
};

// Candidates by G descending; ties keep input order.
std::vector<BaselineCandidate> baseline_order(const Dialogue& dialogue,
                                              const ScoreTable& scores);

// Base lists plus the top `common_cutoff` markers of `stats`.
FilterLists effective_filters(const FilterLists& base, const VocabStats& stats,
                              int common_cutoff);

bool is_bypassed(std::span<const BaselineCandidate> baseline,
                 const RerankConfig& cfg);

// Positions into `baseline` in output order. `head_coor` holds Coor for the
// first min(top_n, n) baseline candidates and is ignored when bypassed.
std::vector<std::size_t> rerank_permutation(
    std::span<const BaselineCandidate> baseline,
    std::span<const double> head_coor, const RerankConfig& cfg);

RunEntry rank_with_coor(const Dialogue& dialogue,
                        std::span<const BaselineCandidate> baseline,
                        std::span<const double> head_coor,
                        const RerankConfig& cfg);

// Unfiltered marker types of a dialogue; filtering happens at scoring time.
struct DialogueMarkers {
  MarkerSet context;
  std::vector<MarkerSet> candidates;  // parallel to Dialogue::candidates
};

DialogueMarkers prepare_markers(const Dialogue& dialogue);

// Coor for the first min(top_n, n) baseline candidates.
std::vector<double> head_coordination(
    const DialogueMarkers& markers, std::span<const BaselineCandidate> baseline,
    const VocabStats& stats, const FilterLists& filters,
    const RerankConfig& cfg);

// `filters` must already include common words (see effective_filters).
RunEntry rerank_dialogue(const Dialogue& dialogue,
                         std::span<const BaselineCandidate> baseline,
                         const VocabStats& stats, const FilterLists& filters,
                         const RerankConfig& cfg);

// `filters` holds the base lists; common words are derived from
// cfg.common_cutoff. Output is in corpus order for any thread count.
RankedRun rerank_corpus(std::span<const Dialogue> corpus,
                        const ScoreTable& scores, const VocabStats& stats,
                        const FilterLists& filters, const RerankConfig& cfg,
                        unsigned threads = 1);

struct ExplanationRow {
  std::string dialogue_id;
  std::string candidate_id;
  Marker marker;
  double coor_m;
};

// Contributing markers of every rescored candidate, in run order.
std::vector<ExplanationRow> explain_corpus(std::span<const Dialogue> corpus,
                                           const ScoreTable& scores,
                                           const VocabStats& stats,
                                           const FilterLists& filters,
                                           const RerankConfig& cfg);

void write_explanations(std::span<const ExplanationRow> rows,
                        const std::filesystem::path& path);

}  // namespace coordrank
