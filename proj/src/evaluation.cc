#include "coordrank/evaluation.h"

#include <algorithm>
#include <charconv>
#include <unordered_map>

#include "coordrank/errors.h"

namespace coordrank {

namespace {

using DialogueIndex = std::unordered_map<std::string_view, const Dialogue*>;

DialogueIndex index_corpus(std::span<const Dialogue> corpus) {
  DialogueIndex index;
  index.reserve(corpus.size());
  for (const auto& d : corpus) index.emplace(d.id, &d);
  return index;
}

const Dialogue& lookup(const DialogueIndex& index, std::string_view id) {
  auto it = index.find(id);
  if (it == index.end())
    throw DataError("run dialogue \"" + std::string(id) +
                    "\" is not in the corpus");
  return *it->second;
}

const std::string& answer_of(const Dialogue& d) {
  if (!d.answer_id)
    throw DataError("dialogue \"" + d.id + "\" has no answer_id");
  return *d.answer_id;
}

}  // namespace

int rank_of(const RunEntry& entry, std::string_view candidate_id) {
  for (std::size_t i = 0; i < entry.ranking.size(); ++i)
    if (entry.ranking[i].candidate_id == candidate_id) return static_cast<int>(i) + 1;
  return 0;
}

EvalReport evaluate(const RankedRun& run, std::span<const Dialogue> corpus,
                    std::span<const int> ks, int histogram_depth) {
  for (int k : ks)
    if (k < 1) throw UsageError("cutoff k must be >= 1, got " + std::to_string(k));
  const DialogueIndex index = index_corpus(corpus);

  EvalReport report;
  report.n_dialogues = run.size();
  for (int k : ks) report.hits_at[k] = 0;
  for (int r = 1; r <= histogram_depth; ++r) report.position_counts[r] = 0;

  double rr_sum = 0.0;
  for (const auto& entry : run) {
    const int rank = rank_of(entry, answer_of(lookup(index, entry.dialogue_id)));
    if (rank == 0) continue;
    rr_sum += 1.0 / rank;
    for (auto& [k, hits] : report.hits_at)
      if (rank <= k) ++hits;
    if (rank <= histogram_depth) ++report.position_counts[rank];
  }

  const double n = static_cast<double>(run.size());
  auto pct = [&](std::size_t c) { return run.empty() ? 0.0 : 100.0 * c / n; };
  for (const auto& [k, hits] : report.hits_at) report.recall_at[k] = pct(hits);
  for (const auto& [r, c] : report.position_counts)
    report.position_histogram[r] = pct(c);
  report.mrr = run.empty() ? 0.0 : rr_sum / n;
  return report;
}

DiffReport diff_runs(const RankedRun& baseline, const RankedRun& reranked,
                     std::span<const Dialogue> corpus, const VocabStats& stats,
                     const FilterLists& filters, const CoordParams& params) {
  if (baseline.size() != reranked.size())
    throw DataError("runs cover different dialogue sets (" +
                    std::to_string(baseline.size()) + " vs " +
                    std::to_string(reranked.size()) + " dialogues)");
  std::unordered_map<std::string_view, const RunEntry*> reranked_by_id;
  for (const auto& e : reranked) reranked_by_id.emplace(e.dialogue_id, &e);
  if (reranked_by_id.size() != reranked.size())
    throw DataError("reranked run lists a dialogue twice");

  const DialogueIndex index = index_corpus(corpus);
  static const FilterLists kNoFilters;
  DiffReport diff;
  for (const auto& base : baseline) {
    auto it = reranked_by_id.find(base.dialogue_id);
    if (it == reranked_by_id.end())
      throw DataError("dialogue \"" + base.dialogue_id +
                      "\" is missing from the reranked run");
    const Dialogue& d = lookup(index, base.dialogue_id);
    const std::string& answer = answer_of(d);
    const bool base_top = rank_of(base, answer) == 1;
    const bool new_top = rank_of(*it->second, answer) == 1;
    ++diff.dialogues;
    if (base_top) {
      ++diff.baseline_correct;
      if (!new_top) ++diff.new_errors;
      continue;
    }
    ++diff.baseline_errors;
    if (new_top) ++diff.corrections;
    const Candidate* c = d.find_candidate(answer);
    if (c != nullptr &&
        coor_pair(context_markers(d, kNoFilters), text_markers(c->text, kNoFilters),
                  stats, filters, params)
                .coor > 0.0)
      ++diff.cap;
  }
  return diff;
}

std::vector<int> parse_ks(std::string_view list) {
  std::vector<int> ks;
  while (!list.empty()) {
    auto comma = list.find(',');
    std::string_view item = list.substr(0, comma);
    int k = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), k);
    if (ec != std::errc() || ptr != item.data() + item.size() || k < 1)
      throw UsageError("invalid cutoff \"" + std::string(item) +
                       "\" in --ks (expected positive integers)");
    ks.push_back(k);
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  if (ks.empty()) throw UsageError("--ks lists no cutoff");
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

}  // namespace coordrank
