#include "coordrank/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "coordrank/errors.h"
#include "coordrank/filter_lists.h"
#include "json.hpp"

namespace coordrank {

namespace {

constexpr std::string_view kConsonants = "bdfgkmnptvz";
constexpr std::string_view kVowels = "aou";
constexpr std::string_view kFinals = "bdfgkpvz";

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double p) { return uniform() < p; }

  // Uniform on [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % n;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

// The first `n` pseudo-words starting at index `*next` that no filter list
// contains.
std::vector<std::string> take_words(std::uint64_t& next, int n) {
  const FilterLists& lists = builtin_filter_lists();
  std::vector<std::string> out;
  while (static_cast<int>(out.size()) < n) {
    std::string w = pseudo_word(next++);
    if (!lists.contains(w)) out.push_back(std::move(w));
  }
  return out;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

void check(bool ok, const char* message) {
  if (!ok) throw UsageError(std::string("synth spec: ") + message);
}

}  // namespace

std::string pseudo_word(std::uint64_t i) {
  const std::uint64_t syllables = kConsonants.size() * kVowels.size();
  int n_syllables = 2;
  std::uint64_t block = syllables * syllables * kFinals.size();
  while (i >= block) {
    i -= block;
    ++n_syllables;
    block *= syllables;
  }
  std::string w;
  w += kFinals[i % kFinals.size()];
  i /= kFinals.size();
  for (int s = 0; s < n_syllables; ++s) {
    const std::uint64_t syl = i % syllables;
    i /= syllables;
    w += kVowels[syl % kVowels.size()];
    w += kConsonants[syl / kVowels.size()];
  }
  std::reverse(w.begin(), w.end());
  return w;
}

const std::vector<std::string>& filler_words() {
  static const std::vector<std::string> kWords{
      "the", "and", "it",   "to",  "of",   "in", "for", "not", "but",
      "with", "can", "just", "all", "what", "how", "on",  "at",  "by"};
  return kWords;
}

void SynthSpec::validate() const {
  check(n_dialogues >= 1, "n_dialogues must be >= 1");
  check(n_candidates >= 1, "n_candidates must be >= 1");
  check(rare_pool_size >= 1, "rare_pool_size must be >= 1");
  check(context_utterances >= 1, "context_utterances must be >= 1");
  check(utterance_length >= 1, "utterance_length must be >= 1");
  check(plant_copies >= 1, "plant_copies must be >= 1");
  check(plant_copies <= context_utterances * utterance_length,
        "plant_copies exceeds the context length");
  // Room for context words plus a disjoint response vocabulary.
  check(vocab_size >= 2 * (context_utterances + 1) * utterance_length,
        "vocab_size must be >= 2 * (context_utterances + 1) * utterance_length");
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  check(prob(p_plant), "p_plant must lie in [0, 1]");
  check(prob(distractor_overlap), "distractor_overlap must lie in [0, 1]");
  check(prob(p_confident), "p_confident must lie in [0, 1]");
  check(baseline_noise > 0.001 && baseline_noise <= 1.0,
        "baseline_noise must lie in (0.001, 1]");
  check(answer_rank >= 0 && answer_rank <= n_candidates,
        "answer_rank must lie in [0, n_candidates]");
}

SynthSpec parse_synth_spec(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("synth spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError("synth spec must be a JSON object");
  SynthSpec spec;
  auto integer = [](const nlohmann::json& v, const std::string& key) {
    if (!v.is_number_integer())
      throw DataError("synth spec key \"" + key + "\" must be an integer");
    return v.get<std::int64_t>();
  };
  auto real = [](const nlohmann::json& v, const std::string& key) {
    if (!v.is_number())
      throw DataError("synth spec key \"" + key + "\" must be a number");
    return v.get<double>();
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "seed") {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw DataError("synth spec key \"seed\" must be a non-negative integer");
      spec.seed = v.get<std::uint64_t>();
    } else if (key == "n_dialogues") spec.n_dialogues = static_cast<int>(integer(v, key));
    else if (key == "n_candidates") spec.n_candidates = static_cast<int>(integer(v, key));
    else if (key == "vocab_size") spec.vocab_size = static_cast<int>(integer(v, key));
    else if (key == "rare_pool_size") spec.rare_pool_size = static_cast<int>(integer(v, key));
    else if (key == "p_plant") spec.p_plant = real(v, key);
    else if (key == "baseline_noise") spec.baseline_noise = real(v, key);
    else if (key == "answer_rank") spec.answer_rank = static_cast<int>(integer(v, key));
    else if (key == "context_utterances") spec.context_utterances = static_cast<int>(integer(v, key));
    else if (key == "utterance_length") spec.utterance_length = static_cast<int>(integer(v, key));
    else if (key == "plant_copies") spec.plant_copies = static_cast<int>(integer(v, key));
    else if (key == "distractor_overlap") spec.distractor_overlap = real(v, key);
    else if (key == "p_confident") spec.p_confident = real(v, key);
    else throw DataError("unknown synth spec key \"" + key + "\"");
  }
  return spec;
}

SynthSpec load_synth_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open synth spec " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_synth_spec(text.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

SynthCorpus generate(const SynthSpec& spec) {
  spec.validate();
  std::uint64_t next_word = 0;
  const std::vector<std::string> vocab = take_words(next_word, spec.vocab_size);
  const std::vector<std::string> rare = take_words(next_word, spec.rare_pool_size);
  const std::vector<std::string>& filler = filler_words();
  constexpr double kFillerRate = 0.3;

  Rng rng(spec.seed);
  const auto n_cand = static_cast<std::size_t>(spec.n_candidates);
  const auto len = static_cast<std::size_t>(spec.utterance_length);

  auto vocab_word = [&](const std::set<std::size_t>& avoid) {
    std::size_t w;
    do w = rng.below(vocab.size());
    while (avoid.contains(w));
    return w;
  };
  // A response-side text avoiding `avoid`, with fillers mixed in.
  auto response = [&](const std::set<std::size_t>& avoid) {
    std::vector<std::string> words;
    for (std::size_t t = 0; t < len; ++t) {
      if (rng.bernoulli(kFillerRate))
        words.push_back(filler[rng.below(filler.size())]);
      else
        words.push_back(vocab[vocab_word(avoid)]);
    }
    return words;
  };

  SynthCorpus out;
  out.dialogues.reserve(static_cast<std::size_t>(spec.n_dialogues));
  for (int di = 0; di < spec.n_dialogues; ++di) {
    char id_buf[32];
    std::snprintf(id_buf, sizeof id_buf, "d%05d", di);
    Dialogue d;
    d.id = id_buf;

    std::set<std::size_t> context_vocab;
    std::vector<std::vector<std::string>> context(
        static_cast<std::size_t>(spec.context_utterances));
    for (auto& utt : context)
      for (std::size_t t = 0; t < len; ++t) {
        if (rng.bernoulli(kFillerRate)) {
          utt.push_back(filler[rng.below(filler.size())]);
        } else {
          std::size_t w = rng.below(vocab.size());
          context_vocab.insert(w);
          utt.push_back(vocab[w]);
        }
      }

    PlantRecord plant;
    plant.dialogue_id = d.id;
    std::string planted;
    if (rng.bernoulli(spec.p_plant)) {
      planted = rare[rng.below(rare.size())];
      std::vector<std::size_t> slots(context.size() * len);
      for (std::size_t s = 0; s < slots.size(); ++s) slots[s] = s;
      rng.shuffle(slots);
      for (int c = 0; c < spec.plant_copies; ++c) {
        const std::size_t s = slots[static_cast<std::size_t>(c)];
        context[s / len][s % len] = planted;
      }
      plant.planted = true;
      plant.marker = planted;
    }
    // Vocabulary words displaced by the plant may no longer occur; keeping
    // them in the avoid set is harmless.

    const std::size_t answer_slot =
        spec.answer_rank == 0 ? rng.below(n_cand)
                              : static_cast<std::size_t>(spec.answer_rank - 1);
    std::vector<std::vector<std::string>> texts(n_cand);  // by baseline rank
    for (std::size_t r = 0; r < n_cand; ++r) {
      if (r == answer_slot) {
        texts[r] = response(context_vocab);
        if (!planted.empty()) texts[r][rng.below(len)] = planted;
      } else if (!context_vocab.empty() && rng.bernoulli(spec.distractor_overlap)) {
        texts[r] = response(context_vocab);
        auto it = context_vocab.begin();
        std::advance(it, static_cast<std::ptrdiff_t>(rng.below(context_vocab.size())));
        texts[r][rng.below(len)] = vocab[*it];
      } else {
        texts[r] = response(context_vocab);
      }
    }

    std::vector<double> g(n_cand);
    g[0] = rng.bernoulli(spec.p_confident) ? 0.991 + 0.009 * rng.uniform()
                                           : 0.5 + 0.4 * rng.uniform();
    std::vector<double> gaps(n_cand > 0 ? n_cand - 1 : 0);
    double gap_sum = 0.0;
    for (auto& gap : gaps) {
      gap = rng.uniform(0.001, spec.baseline_noise);
      gap_sum += gap;
    }
    const double scale = gap_sum > g[0] ? g[0] / gap_sum : 1.0;
    for (std::size_t r = 1; r < n_cand; ++r) g[r] = g[r - 1] - gaps[r - 1] * scale;
    for (auto& x : g) x = std::clamp(x, 0.0, 1.0);

    std::vector<std::size_t> order(n_cand);  // file position -> baseline rank
    for (std::size_t r = 0; r < n_cand; ++r) order[r] = r;
    rng.shuffle(order);

    for (std::size_t u = 0; u < context.size(); ++u)
      d.context.push_back({u % 2 == 0 ? "u1" : "u2", join(context[u])});
    for (std::size_t pos = 0; pos < n_cand; ++pos) {
      const std::size_t r = order[pos];
      std::string cid = "c" + std::to_string(pos);
      d.candidates.push_back({cid, join(texts[r])});
      out.scores.insert(d.id, cid, g[r]);
      if (r == answer_slot) d.answer_id = cid;
    }
    plant.answer_id = *d.answer_id;
    plant.baseline_rank = static_cast<int>(answer_slot) + 1;
    out.plants.push_back(std::move(plant));
    out.dialogues.push_back(std::move(d));
  }
  return out;
}

void write_plant_log(const SynthCorpus& corpus, const SynthSpec& spec,
                     std::ostream& out) {
  out << "# generator: mt19937_64 seed=" << spec.seed << '\n';
  out << "dialogue_id\tplanted\tmarker\tanswer_id\tbaseline_rank\n";
  for (const auto& p : corpus.plants)
    out << p.dialogue_id << '\t' << (p.planted ? 1 : 0) << '\t'
        << (p.marker.empty() ? "-" : p.marker) << '\t' << p.answer_id << '\t'
        << p.baseline_rank << '\n';
}

void write_plant_log(const SynthCorpus& corpus, const SynthSpec& spec,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  write_plant_log(corpus, spec, out);
  out.flush();
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace coordrank
