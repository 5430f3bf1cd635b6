#include "coordrank/tuner.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "coordrank/config.h"
#include "coordrank/corpus_io.h"
#include "coordrank/errors.h"
#include "coordrank/parallel.h"
#include "json.hpp"

namespace coordrank {

namespace {

template <typename T>
bool contains(const std::vector<T>& v, T x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

// Per-dialogue state shared by every grid point.
struct DevDialogue {
  std::vector<BaselineCandidate> baseline;
  std::size_t answer_pos = 0;  // answer's position in `baseline`
  DialogueMarkers markers;     // context plus the top_n baseline candidates
};

std::vector<DevDialogue> prepare_dev(std::span<const Dialogue> corpus,
                                     const ScoreTable& scores, int top_n,
                                     unsigned threads) {
  for (const auto& d : corpus)
    if (!d.answer_id || d.find_candidate(*d.answer_id) == nullptr)
      throw DataError("dev dialogue \"" + d.id + "\" has no answer candidate");

  std::vector<DevDialogue> dev(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t i) {
    const Dialogue& d = corpus[i];
    DevDialogue& out = dev[i];
    out.baseline = baseline_order(d, scores);
    for (std::size_t p = 0; p < out.baseline.size(); ++p)
      if (d.candidates[out.baseline[p].index].id == *d.answer_id) out.answer_pos = p;
    // Candidates below the head are never rescored.
    const std::size_t n = std::min<std::size_t>(out.baseline.size(),
                                                static_cast<std::size_t>(top_n));
    DialogueMarkers full;
    static const FilterLists kNoFilters;
    full.context = context_markers(d, kNoFilters);
    full.candidates.resize(d.candidates.size());
    for (std::size_t p = 0; p < n; ++p) {
      const std::size_t idx = out.baseline[p].index;
      full.candidates[idx] = text_markers(d.candidates[idx].text, kNoFilters);
    }
    out.markers = std::move(full);
  });
  return dev;
}

struct Score {
  std::size_t hits = 0;
  double mrr = 0.0;
};

Score score_point(const std::vector<DevDialogue>& dev,
                  const std::vector<std::vector<double>>& head_coor,
                  const RerankConfig& cfg) {
  Score s;
  double rr = 0.0;
  for (std::size_t i = 0; i < dev.size(); ++i) {
    auto perm = rerank_permutation(dev[i].baseline, head_coor[i], cfg);
    auto it = std::find(perm.begin(), perm.end(), dev[i].answer_pos);
    const auto rank = static_cast<std::size_t>(it - perm.begin()) + 1;
    if (rank == 1) ++s.hits;
    rr += 1.0 / static_cast<double>(rank);
  }
  s.mrr = dev.empty() ? 0.0 : rr / static_cast<double>(dev.size());
  return s;
}

std::vector<double> real_list(const nlohmann::json& v, std::string_view key) {
  if (!v.is_array())
    throw DataError("grid key \"" + std::string(key) + "\" must be a list");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number())
      throw DataError("grid key \"" + std::string(key) + "\" must list numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

std::vector<double> TuneSpec::default_w_coor() {
  std::vector<double> v;
  for (int i = 0; i <= 20; ++i) v.push_back(i / 20.0);
  return v;
}

void TuneSpec::validate() const {
  if (w_g.empty() || w_coor.empty() || k.empty() || bypass_threshold.empty() ||
      common_cutoff.empty())
    throw UsageError("every tuning grid must be non-empty");
  if (!contains(w_g, 1.0) || !contains(w_coor, 0.0))
    throw UsageError("tuning grid must contain the baseline point w_g=1, w_coor=0");
  for (double v : w_g)
    if (!(std::isfinite(v) && v > 0.0)) throw UsageError("w_g grid values must be > 0");
  // Every other field is checked per point by RerankConfig::validate.
  for (double wc : w_coor)
    for (double kk : k)
      for (double b : bypass_threshold)
        for (int c : common_cutoff)
          RerankConfig{1.0, wc, kk, b, top_n, c}.validate();
}

std::size_t TuneSpec::size() const {
  return w_g.size() * w_coor.size() * k.size() * bypass_threshold.size() *
         common_cutoff.size();
}

TuneSpec parse_tune_spec(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("grid is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError("grid must be a JSON object");
  TuneSpec spec;
  for (const auto& [key, value] : j.items()) {
    if (key == "w_g") {
      spec.w_g = real_list(value, key);
    } else if (key == "w_coor") {
      spec.w_coor = real_list(value, key);
    } else if (key == "K") {
      spec.k = real_list(value, key);
    } else if (key == "bypass_threshold") {
      spec.bypass_threshold = real_list(value, key);
    } else if (key == "common_cutoff") {
      if (!value.is_array()) throw DataError("grid key \"common_cutoff\" must be a list");
      spec.common_cutoff.clear();
      for (const auto& x : value) {
        if (!x.is_number_integer())
          throw DataError("grid key \"common_cutoff\" must list integers");
        spec.common_cutoff.push_back(x.get<int>());
      }
    } else if (key == "top_n") {
      if (!value.is_number_integer()) throw DataError("grid key \"top_n\" must be an integer");
      spec.top_n = value.get<int>();
    } else {
      throw DataError("unknown grid key \"" + key + "\"");
    }
  }
  return spec;
}

TuneSpec load_tune_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open grid " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_tune_spec(text.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

bool better_point(const TracePoint& a, const TracePoint& b) {
  if (a.r1_hits != b.r1_hits) return a.r1_hits > b.r1_hits;
  if (a.mrr != b.mrr) return a.mrr > b.mrr;
  if (a.config.w_coor != b.config.w_coor) return a.config.w_coor < b.config.w_coor;
  return a.config.k < b.config.k;
}

TuneResult tune(std::span<const Dialogue> dev_corpus, const ScoreTable& dev_scores,
                const VocabStats& stats, const FilterLists& filters,
                const TuneSpec& spec, unsigned threads) {
  spec.validate();
  if (dev_corpus.empty()) throw DataError("dev corpus is empty");

  const std::vector<DevDialogue> dev =
      prepare_dev(dev_corpus, dev_scores, spec.top_n, threads);

  TuneResult result;
  result.n_dialogues = dev.size();
  result.trace.reserve(spec.size());
  const double n = static_cast<double>(dev.size());

  for (int cutoff : spec.common_cutoff) {
    const FilterLists eff = effective_filters(filters, stats, cutoff);
    for (double k : spec.k) {
      RerankConfig probe{1.0, 1.0, k, 1.0, spec.top_n, cutoff};
      std::vector<std::vector<double>> head_coor(dev.size());
      parallel_for(dev.size(), threads, [&](std::size_t i) {
        head_coor[i] = head_coordination(dev[i].markers, dev[i].baseline, stats,
                                         eff, probe);
      });

      std::vector<TracePoint> block;
      for (double wg : spec.w_g)
        for (double wc : spec.w_coor)
          for (double b : spec.bypass_threshold)
            block.push_back({RerankConfig{wg, wc, k, b, spec.top_n, cutoff}, 0, 0, 0});
      parallel_for(block.size(), threads, [&](std::size_t p) {
        Score s = score_point(dev, head_coor, block[p].config);
        block[p].r1_hits = s.hits;
        block[p].r1 = 100.0 * static_cast<double>(s.hits) / n;
        block[p].mrr = s.mrr;
      });
      result.trace.insert(result.trace.end(), block.begin(), block.end());
    }
  }

  for (std::size_t i = 1; i < result.trace.size(); ++i)
    if (better_point(result.trace[i], result.trace[result.best_index]))
      result.best_index = i;
  result.best = result.trace[result.best_index].config;

  // The baseline point: identical ranking for every K, cutoff and threshold.
  std::size_t hits = 0;
  double rr = 0.0;
  for (const auto& d : dev) {
    if (d.answer_pos == 0) ++hits;
    rr += 1.0 / static_cast<double>(d.answer_pos + 1);
  }
  result.baseline_r1_hits = hits;
  result.baseline_r1 = 100.0 * static_cast<double>(hits) / n;
  result.baseline_mrr = rr / n;
  return result;
}

void write_trace(const TuneResult& result, std::ostream& out) {
  out << "common_cutoff\tK\tw_g\tw_coor\tbypass_threshold\ttop_n\tr1_hits\tR@1\tMRR\n";
  for (const auto& p : result.trace) {
    const auto& c = p.config;
    out << c.common_cutoff << '\t' << format_real(c.k) << '\t' << format_real(c.w_g)
        << '\t' << format_real(c.w_coor) << '\t' << format_real(c.bypass_threshold)
        << '\t' << c.top_n << '\t' << p.r1_hits << '\t' << format_fixed6(p.r1)
        << '\t' << format_fixed6(p.mrr) << '\n';
  }
}

void write_trace(const TuneResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  write_trace(result, out);
  out.flush();
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace coordrank
