#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coordrank/coordination.h"
#include "coordrank/filter_lists.h"
#include "coordrank/types.h"
#include "coordrank/vocab_stats.h"

namespace coordrank {

struct EvalReport {
  std::size_t n_dialogues = 0;
  std::map<int, std::size_t> hits_at;          // |{d : rank(answer) <= k}|
  std::map<int, double> recall_at;             // percentage
  double mrr = 0.0;                            // in [0, 1]
  std::map<int, std::size_t> position_counts;  // |{d : rank(answer) == r}|
  std::map<int, double> position_histogram;    // percentage

  bool operator==(const EvalReport&) const = default;
};

// Recall@k for each k in `ks`, MRR over the full list, and the answer-position
// histogram for ranks 1..histogram_depth. Every run dialogue must exist in the
// corpus and carry an answer; an answer missing from its ranked list counts
// as a miss with reciprocal rank 0.
EvalReport evaluate(const RankedRun& run, std::span<const Dialogue> corpus,
                    std::span<const int> ks, int histogram_depth = 3);

// 1-based rank of `candidate_id` in `entry`, or 0 when absent.
int rank_of(const RunEntry& entry, std::string_view candidate_id);

struct DiffReport {
  std::size_t dialogues = 0;
  std::size_t baseline_errors = 0;   // answer not at rank 1 in the baseline
  std::size_t baseline_correct = 0;
  std::size_t cap = 0;               // baseline errors whose answer coordinates
  std::size_t corrections = 0;       // baseline errors fixed by reranking
  std::size_t new_errors = 0;        // baseline successes broken by reranking

  bool operator==(const DiffReport&) const = default;
};

// `filters` must be the effective lists (including common words) the
// reranked run was produced with.
DiffReport diff_runs(const RankedRun& baseline, const RankedRun& reranked,
                     std::span<const Dialogue> corpus, const VocabStats& stats,
                     const FilterLists& filters, const CoordParams& params);

// Fixed-width text tables. Columns are (label, report) pairs.
std::string render_eval_table(
    std::span<const std::pair<std::string, EvalReport>> columns);
std::string render_position_table(
    std::span<const std::pair<std::string, EvalReport>> columns);
std::string render_diff_table(
    std::span<const std::pair<std::string, DiffReport>> columns);

// Machine-readable JSON renderings.
std::string eval_report_json(
    std::span<const std::pair<std::string, EvalReport>> columns);
std::string diff_report_json(const DiffReport& diff,
                             std::span<const std::pair<std::string, EvalReport>>
                                 positions);

std::vector<int> parse_ks(std::string_view list);

}  // namespace coordrank
