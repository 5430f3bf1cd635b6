#pragma once

// Wire formats:
//   dialogues  one JSON object per line:
//              {"id", "context":[{"speaker","text"}...],
//               "candidates":[{"id","text"}...], "answer_id": string|null}
//   scores     dialogue_id<TAB>candidate_id<TAB>score
//   runs       dialogue_id<TAB>rank<TAB>candidate_id<TAB>S<TAB>G<TAB>Coor
//              reals fixed at 6 decimals; lines starting with '#' are comments

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coordrank/types.h"

namespace coordrank {

enum class NoAnswerPolicy {
  kDrop,     // evaluation splits: no-answer dialogues are excluded
  kConvert,  // training style: last context utterance becomes the answer
  kKeep,
};

struct CleaningPolicy {
  NoAnswerPolicy no_answer = NoAnswerPolicy::kDrop;
  // Strict: a malformed record is fatal. Lenient: it is counted and skipped.
  bool strict = true;
};

struct CleaningReport {
  std::size_t records = 0;
  std::size_t kept = 0;
  std::size_t empty_candidate = 0;
  std::size_t empty_context = 0;
  std::size_t no_candidates = 0;
  std::size_t duplicate_candidate_id = 0;
  std::size_t no_answer_dropped = 0;
  std::size_t no_answer_converted = 0;
  std::size_t malformed = 0;
  std::vector<std::string> errors;       // one message per malformed record
  std::vector<std::string> dropped_ids;  // ids of well-formed dropped records

  std::size_t dropped() const;
  bool operator==(const CleaningReport&) const = default;
};

struct LoadedCorpus {
  std::vector<Dialogue> dialogues;
  CleaningReport report;
};

NoAnswerPolicy parse_no_answer_policy(std::string_view name);

LoadedCorpus load_corpus(const std::filesystem::path& path,
                         const CleaningPolicy& policy = {});
LoadedCorpus read_corpus(std::istream& in, const CleaningPolicy& policy = {});

// Applies the cleaning rules to dialogues already in memory.
LoadedCorpus clean_corpus(std::vector<Dialogue> dialogues,
                          const CleaningPolicy& policy = {});

std::string dialogue_to_json(const Dialogue& dialogue);
void write_corpus(std::span<const Dialogue> dialogues, std::ostream& out);
void write_corpus(std::span<const Dialogue> dialogues,
                  const std::filesystem::path& path);

// Strict join: every (dialogue, candidate) of the corpus must be scored
// exactly once, scores must lie in [0,1], and rows may only name known ids.
// Rows for dialogues listed in `ignored_dialogues` (e.g. dropped by cleaning)
// are skipped.
ScoreTable load_scores(const std::filesystem::path& path,
                       std::span<const Dialogue> corpus,
                       const std::set<std::string, std::less<>>&
                           ignored_dialogues = {});
ScoreTable read_scores(std::istream& in, std::span<const Dialogue> corpus,
                       const std::set<std::string, std::less<>>&
                           ignored_dialogues = {});

// Rows in corpus order, scores in shortest round-trip decimal form.
void write_scores(const ScoreTable& scores, std::span<const Dialogue> corpus,
                  std::ostream& out);
void write_scores(const ScoreTable& scores, std::span<const Dialogue> corpus,
                  const std::filesystem::path& path);

// `header`, when non-empty, is written as a single leading '#' comment line.
void write_run(const RankedRun& run, std::ostream& out,
               std::string_view header = {});
void write_run(const RankedRun& run, const std::filesystem::path& path,
               std::string_view header = {});

RankedRun load_run(const std::filesystem::path& path);
RankedRun read_run(std::istream& in);

// Throws DataError if ranks are not 1..n or S increases down a list.
void validate_run(const RankedRun& run);

// Fixed 6-decimal rendering used by run files.
std::string format_fixed6(double value);

}  // namespace coordrank
