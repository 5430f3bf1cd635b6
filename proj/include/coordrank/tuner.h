#pragma once
// Exhaustive grid search over RerankConfig on a development split.
//
// Objective is R@1; ties go to higher MRR, then smaller w_coor, then smaller
// K, then the earlier grid point. Trace order is
//   common_cutoff > K > w_g > w_coor > bypass_threshold
// (outermost first).

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "coordrank/filter_lists.h"
#include "coordrank/reranker.h"
#include "coordrank/types.h"
#include "coordrank/vocab_stats.h"

namespace coordrank {

struct TuneSpec {
  std::vector<double> w_g{1.0};
  std::vector<double> w_coor = default_w_coor();
  std::vector<double> k{0.5, 1.0, 2.0, 5.0, 10.0, 50.0};
  std::vector<double> bypass_threshold{0.95, 0.99, 0.999, 1.0};
  std::vector<int> common_cutoff{0, 100, 200, 400};
  int top_n = 10;

  // 0, 0.05, ..., 1.0
  static std::vector<double> default_w_coor();

  // Grids must be non-empty with valid values, and contain w_g = 1 and
  // w_coor = 0 so the baseline ranking is always a candidate.
  void validate() const;
  std::size_t size() const;
};

// Grid JSON: an object whose keys (w_g, w_coor, K, bypass_threshold,
// common_cutoff) map to value lists and top_n to an integer. Missing keys keep
// the defaults.
TuneSpec parse_tune_spec(std::string_view json_text);
TuneSpec load_tune_spec(const std::filesystem::path& path);

struct TracePoint {
  RerankConfig config;
  std::size_t r1_hits = 0;
  double r1 = 0.0;   // percentage
  double mrr = 0.0;  // in [0, 1]
};

struct TuneResult {
  RerankConfig best;
  std::size_t best_index = 0;  // into trace
  std::vector<TracePoint> trace;
  std::size_t n_dialogues = 0;
  std::size_t baseline_r1_hits = 0;
  double baseline_r1 = 0.0;
  double baseline_mrr = 0.0;
};

// `filters` holds the base lists; common words come from each grid point's
// cutoff. Every dev dialogue needs an answer. The result does not depend on
// `threads`.
TuneResult tune(std::span<const Dialogue> dev_corpus, const ScoreTable& dev_scores,
                const VocabStats& stats, const FilterLists& filters,
                const TuneSpec& spec, unsigned threads = 1);

// True when `a` beats `b` under the objective and tiebreak chain (trace
// position excluded).
bool better_point(const TracePoint& a, const TracePoint& b);

void write_trace(const TuneResult& result, std::ostream& out);
void write_trace(const TuneResult& result, const std::filesystem::path& path);

}  // namespace coordrank
