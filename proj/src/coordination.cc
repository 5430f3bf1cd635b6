#include "coordrank/coordination.h"

#include <algorithm>

#include "coordrank/textnorm.h"

namespace coordrank {

double coor_marker(std::string_view marker, const VocabStats& stats,
                   const CoordParams& params) {
  const double p = response_probability(stats, marker, params.alpha);
  return std::max(0.0, 1.0 - params.k * p);
}

CoordinationScore coor_pair(const MarkerSet& context_markers,
                            const MarkerSet& candidate_markers,
                            const VocabStats& stats, const FilterLists& filters,
                            const CoordParams& params) {
  CoordinationScore score;
  double sum = 0.0;
  auto a = context_markers.begin();
  auto b = candidate_markers.begin();
  while (a != context_markers.end() && b != candidate_markers.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      if (!filters.contains(*a) && !is_category_token(*a)) {
        double value = coor_marker(*a, stats, params);
        if (value > 0.0) {
          score.contributing.emplace_back(*a, value);
          sum += value;
        }
      }
      ++a;
      ++b;
    }
  }
  if (!score.contributing.empty())
    score.coor = sum / static_cast<double>(score.contributing.size());
  return score;
}

MarkerSet text_markers(std::string_view text, const FilterLists& filters) {
  return marker_types(normalize(text), filters);
}

MarkerSet context_markers(const Dialogue& dialogue, const FilterLists& filters) {
  MarkerSet out;
  for (const auto& u : dialogue.context) out.merge(text_markers(u.text, filters));
  return out;
}

}  // namespace coordrank
