#pragma once

// Lexical coordination between a dialogue context and one candidate.
//
// For a marker m used in both the context and the candidate,
//
//   coor_m = max(0, 1 - K * P(m))
//
// with P the smoothed response probability from VocabStats. The pair score is
// the mean of the non-zero coor_m over the overlapping markers, or 0 when
// there are none. Markers are compared at the type level: repeating a word
// does not add credit.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coordrank/filter_lists.h"
#include "coordrank/types.h"
#include "coordrank/vocab_stats.h"

namespace coordrank {

struct CoordParams {
  double k = 1.0;
  double alpha = 1.0;
};

struct CoordinationScore {
  double coor = 0.0;
  // Overlapping markers with coor_m > 0, in marker order.
  std::vector<std::pair<Marker, double>> contributing;
};

// Only meaningful for markers present on both sides.
double coor_marker(std::string_view marker, const VocabStats& stats,
                   const CoordParams& params);

CoordinationScore coor_pair(const MarkerSet& context_markers,
                            const MarkerSet& candidate_markers,
                            const VocabStats& stats, const FilterLists& filters,
                            const CoordParams& params);

// Union of marker types over every context utterance.
MarkerSet context_markers(const Dialogue& dialogue, const FilterLists& filters);
MarkerSet text_markers(std::string_view text, const FilterLists& filters);

}  // namespace coordrank
