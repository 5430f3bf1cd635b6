#pragma once
// Seeded synthetic corpora with a controllable coordination signal.
//
// Text is token soup over generated pseudo-words (fixed points of the
// stemmer, never category tokens) plus filler stopwords. In a planted
// dialogue one marker from a rare pool occurs `plant_copies` times in the
// context and once in the answer; no other candidate ever uses the rare pool.
// Non-filler words of the answer avoid the context vocabulary, and so do
// distractors unless `distractor_overlap` fires for them.
//
// Baseline G: the best candidate gets 0.5 + 0.4u (or 0.991 + 0.009u with
// probability p_confident), each next one is lower by U(0.001, baseline_noise),
// rescaled when needed to stay >= 0. The answer sits at `answer_rank`
// (uniform over 1..n_candidates when 0). Candidate order in the file is
// shuffled.
//
// Every random draw comes from one mt19937_64 stream seeded with `seed`;
// doubles use the top 53 bits and integers use rejection sampling, so output
// is identical across platforms.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "coordrank/types.h"

namespace coordrank {

struct SynthSpec {
  std::uint64_t seed = 1;
  int n_dialogues = 100;
  int n_candidates = 10;
  int vocab_size = 2000;
  int rare_pool_size = 500;
  double p_plant = 0.5;
  double baseline_noise = 0.1;
  int answer_rank = 0;
  int context_utterances = 3;
  int utterance_length = 6;
  int plant_copies = 2;
  double distractor_overlap = 0.0;
  double p_confident = 0.0;

  // Throws UsageError.
  void validate() const;
  bool operator==(const SynthSpec&) const = default;
};

SynthSpec parse_synth_spec(std::string_view json_text);
SynthSpec load_synth_spec(const std::filesystem::path& path);

struct PlantRecord {
  std::string dialogue_id;
  bool planted = false;
  std::string marker;  // empty when not planted
  std::string answer_id;
  int baseline_rank = 0;
};

struct SynthCorpus {
  std::vector<Dialogue> dialogues;
  ScoreTable scores;
  std::vector<PlantRecord> plants;  // parallel to dialogues
};

SynthCorpus generate(const SynthSpec& spec);

// i-th generated pseudo-word; distinct for distinct i.
std::string pseudo_word(std::uint64_t i);

// Filler words mixed into every text; all are stopwords.
const std::vector<std::string>& filler_words();

void write_plant_log(const SynthCorpus& corpus, const SynthSpec& spec,
                     std::ostream& out);
void write_plant_log(const SynthCorpus& corpus, const SynthSpec& spec,
                     const std::filesystem::path& path);

}  // namespace coordrank
