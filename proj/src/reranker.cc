#include "coordrank/reranker.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "coordrank/corpus_io.h"
#include "coordrank/errors.h"
#include "coordrank/parallel.h"
#include "coordrank/textnorm.h"

namespace coordrank {

namespace {

std::size_t head_size(std::size_t n, const RerankConfig& cfg) {
  return std::min<std::size_t>(n, static_cast<std::size_t>(cfg.top_n));
}

// Context plus the first `head` baseline candidates; the rest stay empty.
DialogueMarkers prepare_head_markers(const Dialogue& dialogue,
                                     std::span<const BaselineCandidate> baseline,
                                     std::size_t head) {
  static const FilterLists kNoFilters;
  DialogueMarkers markers;
  markers.context = context_markers(dialogue, kNoFilters);
  markers.candidates.resize(dialogue.candidates.size());
  for (std::size_t i = 0; i < head; ++i) {
    const std::size_t idx = baseline[i].index;
    markers.candidates[idx] =
        text_markers(dialogue.candidates[idx].text, kNoFilters);
  }
  return markers;
}

}  // namespace

void RerankConfig::validate() const {
  auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!finite_nonneg(w_g)) throw UsageError("w_g must be a finite real >= 0");
  if (!finite_nonneg(w_coor))
    throw UsageError("w_coor must be a finite real >= 0");
  if (!(w_g + w_coor > 0.0)) throw UsageError("w_g + w_coor must be > 0");
  if (!finite_nonneg(k)) throw UsageError("K must be a finite real >= 0");
  if (!(bypass_threshold > 0.0 && bypass_threshold <= 1.0))
    throw UsageError("bypass_threshold must lie in (0, 1]");
  if (top_n < 1) throw UsageError("top_n must be >= 1");
  if (common_cutoff < 0) throw UsageError("common_cutoff must be >= 0");
}

double fuse(double g, double coor, const RerankConfig& cfg) {
  return cfg.w_g * g + cfg.w_coor * coor;
}

std::vector<BaselineCandidate> baseline_order(const Dialogue& dialogue,
                                              const ScoreTable& scores) {
  std::vector<BaselineCandidate> order;
  order.reserve(dialogue.candidates.size());
  for (std::size_t i = 0; i < dialogue.candidates.size(); ++i)
    order.push_back({i, scores.at(dialogue.id, dialogue.candidates[i].id)});
  std::stable_sort(order.begin(), order.end(),
                   [](const BaselineCandidate& a, const BaselineCandidate& b) {
                     return a.g > b.g;
                   });
  return order;
}

FilterLists effective_filters(const FilterLists& base, const VocabStats& stats,
                              int common_cutoff) {
  FilterLists out = base;
  out.common_words =
      common_words(stats, static_cast<std::size_t>(std::max(common_cutoff, 0)));
  return out;
}

bool is_bypassed(std::span<const BaselineCandidate> baseline,
                 const RerankConfig& cfg) {
  double best = 0.0;
  for (const auto& b : baseline) best = std::max(best, b.g);
  return !baseline.empty() && best > cfg.bypass_threshold;
}

std::vector<std::size_t> rerank_permutation(
    std::span<const BaselineCandidate> baseline,
    std::span<const double> head_coor, const RerankConfig& cfg) {
  std::vector<std::size_t> perm(baseline.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  if (is_bypassed(baseline, cfg)) return perm;

  const std::size_t head = head_size(baseline.size(), cfg);
  if (head_coor.size() < head)
    throw UsageError("rerank_permutation: missing Coor for rescored candidates");
  std::vector<double> s(head);
  for (std::size_t i = 0; i < head; ++i)
    s[i] = fuse(baseline[i].g, head_coor[i], cfg);
  std::stable_sort(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(head),
                   [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
  return perm;
}

RunEntry rank_with_coor(const Dialogue& dialogue,
                        std::span<const BaselineCandidate> baseline,
                        std::span<const double> head_coor,
                        const RerankConfig& cfg) {
  const bool bypassed = is_bypassed(baseline, cfg);
  const std::size_t head = bypassed ? 0 : head_size(baseline.size(), cfg);
  auto perm = rerank_permutation(baseline, head_coor, cfg);

  RunEntry entry{dialogue.id, {}};
  entry.ranking.reserve(perm.size());
  for (std::size_t pos = 0; pos < perm.size(); ++pos) {
    const std::size_t i = perm[pos];
    const BaselineCandidate& b = baseline[i];
    RankedCandidate rc;
    rc.rank = static_cast<int>(pos) + 1;
    rc.candidate_id = dialogue.candidates[b.index].id;
    rc.g = b.g;
    rc.coor = i < head ? head_coor[i] : 0.0;
    rc.s = i < head ? fuse(b.g, rc.coor, cfg) : cfg.w_g * b.g;
    entry.ranking.push_back(std::move(rc));
  }
  return entry;
}

DialogueMarkers prepare_markers(const Dialogue& dialogue) {
  static const FilterLists kNoFilters;
  DialogueMarkers markers;
  markers.context = context_markers(dialogue, kNoFilters);
  markers.candidates.reserve(dialogue.candidates.size());
  for (const auto& c : dialogue.candidates)
    markers.candidates.push_back(text_markers(c.text, kNoFilters));
  return markers;
}

std::vector<double> head_coordination(
    const DialogueMarkers& markers, std::span<const BaselineCandidate> baseline,
    const VocabStats& stats, const FilterLists& filters,
    const RerankConfig& cfg) {
  const std::size_t head = head_size(baseline.size(), cfg);
  std::vector<double> coor(head);
  for (std::size_t i = 0; i < head; ++i)
    coor[i] = coor_pair(markers.context, markers.candidates[baseline[i].index],
                        stats, filters, cfg.coord_params())
                  .coor;
  return coor;
}

RunEntry rerank_dialogue(const Dialogue& dialogue,
                         std::span<const BaselineCandidate> baseline,
                         const VocabStats& stats, const FilterLists& filters,
                         const RerankConfig& cfg) {
  if (baseline.size() != dialogue.candidates.size())
    throw DataError("dialogue \"" + dialogue.id +
                    "\": baseline order does not cover every candidate");
  if (is_bypassed(baseline, cfg)) return rank_with_coor(dialogue, baseline, {}, cfg);
  const std::size_t head = head_size(baseline.size(), cfg);
  auto markers = prepare_head_markers(dialogue, baseline, head);
  auto coor = head_coordination(markers, baseline, stats, filters, cfg);
  return rank_with_coor(dialogue, baseline, coor, cfg);
}

RankedRun rerank_corpus(std::span<const Dialogue> corpus,
                        const ScoreTable& scores, const VocabStats& stats,
                        const FilterLists& filters, const RerankConfig& cfg,
                        unsigned threads) {
  cfg.validate();
  const FilterLists eff = effective_filters(filters, stats, cfg.common_cutoff);
  RankedRun run(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t i) {
    auto baseline = baseline_order(corpus[i], scores);
    run[i] = rerank_dialogue(corpus[i], baseline, stats, eff, cfg);
  });
  return run;
}

std::vector<ExplanationRow> explain_corpus(std::span<const Dialogue> corpus,
                                           const ScoreTable& scores,
                                           const VocabStats& stats,
                                           const FilterLists& filters,
                                           const RerankConfig& cfg) {
  cfg.validate();
  const FilterLists eff = effective_filters(filters, stats, cfg.common_cutoff);
  std::vector<ExplanationRow> rows;
  for (const auto& d : corpus) {
    auto baseline = baseline_order(d, scores);
    if (is_bypassed(baseline, cfg)) continue;
    const std::size_t head = head_size(baseline.size(), cfg);
    auto markers = prepare_head_markers(d, baseline, head);
    std::vector<CoordinationScore> detail(head);
    std::vector<double> coor(head);
    for (std::size_t i = 0; i < head; ++i) {
      detail[i] = coor_pair(markers.context, markers.candidates[baseline[i].index],
                            stats, eff, cfg.coord_params());
      coor[i] = detail[i].coor;
    }
    for (std::size_t i : rerank_permutation(baseline, coor, cfg)) {
      if (i >= head) continue;
      for (const auto& [marker, value] : detail[i].contributing)
        rows.push_back({d.id, d.candidates[baseline[i].index].id, marker, value});
    }
  }
  return rows;
}

void write_explanations(std::span<const ExplanationRow> rows,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& r : rows)
    out << r.dialogue_id << '\t' << r.candidate_id << '\t' << r.marker << '\t'
        << format_fixed6(r.coor_m) << '\n';
  out.flush();
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace coordrank
