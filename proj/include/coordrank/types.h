#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coordrank {

struct Utterance {
  std::string speaker;
  std::string text;

  bool operator==(const Utterance&) const = default;
};

struct Candidate {
  std::string id;
  std::string text;

  bool operator==(const Candidate&) const = default;
};

// One evaluation instance. An absent answer_id encodes the no-answer case.
struct Dialogue {
  std::string id;
  std::vector<Utterance> context;
  std::vector<Candidate> candidates;
  std::optional<std::string> answer_id;

  const Candidate* find_candidate(std::string_view candidate_id) const;

  bool operator==(const Dialogue&) const = default;
};

// First-pass ("generic") scores G keyed by (dialogue_id, candidate_id).
class ScoreTable {
 public:
  // Returns false if the key was already present (value left unchanged).
  bool insert(std::string_view dialogue_id, std::string_view candidate_id,
              double g);
  std::optional<double> find(std::string_view dialogue_id,
                             std::string_view candidate_id) const;
  // Throws DataError when the key is absent.
  double at(std::string_view dialogue_id, std::string_view candidate_id) const;

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool operator==(const ScoreTable&) const = default;

 private:
  std::map<std::string, std::map<std::string, double, std::less<>>,
           std::less<>>
      scores_;
  std::size_t size_ = 0;
};

struct RankedCandidate {
  int rank = 0;  // 1-based
  std::string candidate_id;
  double s = 0.0;
  double g = 0.0;
  double coor = 0.0;

  bool operator==(const RankedCandidate&) const = default;
};

struct RunEntry {
  std::string dialogue_id;
  std::vector<RankedCandidate> ranking;

  bool operator==(const RunEntry&) const = default;
};

// Per-dialogue ranked lists, in corpus order.
using RankedRun = std::vector<RunEntry>;

}  // namespace coordrank
