// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each check also enforces its runtime budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "coordrank/config.h"
#include "coordrank/coordination.h"
#include "coordrank/corpus_io.h"
#include "coordrank/evaluation.h"
#include "coordrank/filter_lists.h"
#include "coordrank/reranker.h"
#include "coordrank/synth.h"
#include "coordrank/tuner.h"
#include "coordrank/vocab_stats.h"
#include "reference_rerank.h"
#include "test_util.h"

namespace coordrank {
namespace {

struct Failure {
  std::string what;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

RerankConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RerankConfig cfg;
  cfg.w_g = 0.05 + 2.0 * u(rng);
  cfg.w_coor = u(rng) < 0.1 ? 0.0 : 4.0 * u(rng);
  cfg.k = std::array<double, 6>{0.0, 0.5, 1.0, 2.0, 5.0, 10.0}[rng() % 6];
  cfg.bypass_threshold = std::array<double, 4>{0.95, 0.99, 0.999, 1.0}[rng() % 4];
  cfg.top_n = 1 + static_cast<int>(rng() % 15);
  cfg.common_cutoff = std::array<int, 5>{0, 10, 50, 200, 400}[rng() % 5];
  return cfg;
}

SynthSpec corpus_spec(std::uint64_t seed, int n) {
  SynthSpec s;
  s.seed = seed;
  s.n_dialogues = n;
  s.n_candidates = 10;
  s.vocab_size = 400;
  s.rare_pool_size = 100;
  s.p_plant = 0.5;
  s.distractor_overlap = 0.3;
  s.p_confident = 0.1;
  return s;
}

std::vector<std::string> ids(const RunEntry& e) {
  std::vector<std::string> out;
  for (const auto& rc : e.ranking) out.push_back(rc.candidate_id);
  return out;
}

RankedRun baseline_run(const SynthCorpus& s, const VocabStats& stats) {
  RerankConfig cfg;
  cfg.w_coor = 0.0;
  return rerank_corpus(s.dialogues, s.scores, stats, builtin_filter_lists(), cfg);
}

void check_r10_invariance() {
  std::mt19937_64 rng(1001);
  std::vector<int> ks{10};
  for (std::uint64_t c = 0; c < 50; ++c) {
    auto s = generate(corpus_spec(5000 + c, 100));
    auto stats = build_stats(s.dialogues);
    const auto before = evaluate(baseline_run(s, stats), s.dialogues, ks).hits_at.at(10);
    for (int i = 0; i < 20; ++i) {
      auto cfg = random_config(rng);
      auto run = rerank_corpus(s.dialogues, s.scores, stats, builtin_filter_lists(), cfg);
      require(evaluate(run, s.dialogues, ks).hits_at.at(10) == before,
              "R@10 changed on corpus " + std::to_string(c) + " with " +
                  config_fingerprint(cfg));
    }
  }
}

void check_oracle_equivalence() {
  auto s = generate(corpus_spec(2024, 1000));
  auto stats = build_stats(s.dialogues);
  const auto lists = builtin_filter_lists();
  std::set<std::string> base;
  for (const MarkerSet* m : {&lists.stopwords, &lists.interjections, &lists.number_words})
    base.insert(m->begin(), m->end());
  auto counts = oracle::count_corpus(s.dialogues);
  std::mt19937_64 rng(1002);
  for (int i = 0; i < 24; ++i) {
    auto cfg = random_config(rng);
    auto run = rerank_corpus(s.dialogues, s.scores, stats, lists, cfg);
    auto ref = oracle::reference_rerank(s.dialogues, s.scores, counts, base, cfg);
    for (std::size_t d = 0; d < run.size(); ++d) {
      require(run[d].ranking.size() == ref[d].size(), "list length differs");
      for (std::size_t r = 0; r < ref[d].size(); ++r)
        require(run[d].ranking[r].candidate_id == ref[d][r].candidate_id,
                "ordering differs in " + run[d].dialogue_id + " with " +
                    config_fingerprint(cfg));
    }
  }
}

RunEntry entry(const std::string& id, const std::vector<std::string>& order) {
  RunEntry e{id, {}};
  for (std::size_t i = 0; i < order.size(); ++i)
    e.ranking.push_back({static_cast<int>(i) + 1, order[i], 0.0, 0.0, 0.0});
  return e;
}

void check_metrics() {
  using testing::make_dialogue;
  std::vector<Dialogue> fixture{
      make_dialogue("d1", {"x"}, {{"a", "p"}, {"b", "q"}, {"c", "r"}, {"e", "s"}}, "a"),
      make_dialogue("d2", {"x"}, {{"a", "p"}, {"b", "q"}, {"c", "r"}, {"e", "s"}}, "e")};
  RankedRun run{entry("d1", {"a", "b", "c", "e"}), entry("d2", {"a", "b", "c", "e"})};
  std::vector<int> ks{1, 10};
  auto r = evaluate(run, fixture, ks);
  require(r.recall_at.at(1) == 50.0 && r.recall_at.at(10) == 100.0 && r.mrr == 0.625,
          "hand fixture metrics");

  auto s = generate(corpus_spec(77, 200));
  auto stats = build_stats(s.dialogues);
  const auto lists = builtin_filter_lists();
  std::mt19937_64 rng(1003);
  std::vector<int> k1{1};
  for (int i = 0; i < 100; ++i) {
    auto a_cfg = random_config(rng);
    auto b_cfg = random_config(rng);
    auto a = rerank_corpus(s.dialogues, s.scores, stats, lists, a_cfg);
    auto b = rerank_corpus(s.dialogues, s.scores, stats, lists, b_cfg);
    const auto eff = effective_filters(lists, stats, b_cfg.common_cutoff);
    auto self = diff_runs(a, a, s.dialogues, stats, eff, a_cfg.coord_params());
    require(self.corrections == 0 && self.new_errors == 0, "diff(x, x) is not empty");
    auto d = diff_runs(a, b, s.dialogues, stats, eff, b_cfg.coord_params());
    const long delta = static_cast<long>(evaluate(b, s.dialogues, k1).hits_at.at(1)) -
                       static_cast<long>(evaluate(a, s.dialogues, k1).hits_at.at(1));
    require(static_cast<long>(d.corrections) - static_cast<long>(d.new_errors) == delta,
            "corrections - new_errors != delta R@1 hits");
  }
}

void check_equation_vectors() {
  VocabStats stats;
  stats.count_total["m"] = 12;
  stats.count_response["m"] = 3;
  stats.count_total["n"] = 4;
  stats.count_response["n"] = 2;
  stats.total_tokens = 16;
  rank_by_frequency(stats);
  require(std::abs(coor_marker("m", stats, CoordParams{1.0, 1.0}) - (1.0 - 4.0 / 13.0)) <= 1e-12,
          "coor_marker smoothed value");
  // P = (2 + 1) / (4 + 1) = 0.6, K = 2.
  require(coor_marker("n", stats, CoordParams{2.0, 1.0}) == 0.0, "clamp case");
  RerankConfig cfg;
  cfg.w_g = 0.7;
  cfg.w_coor = 0.3;
  require(std::abs(fuse(0.8, 0.5, cfg) - 0.71) <= 1e-12, "fuse");
}

void check_tuner() {
  // Safety on an unplanted split with the default grid.
  {
    SynthSpec spec = corpus_spec(31, 500);
    spec.p_plant = 0.3;
    auto dev = generate(spec);
    auto stats = build_stats(dev.dialogues);
    auto res = tune(dev.dialogues, dev.scores, stats, builtin_filter_lists(), TuneSpec{}, 0);
    require(res.trace[res.best_index].r1_hits >= res.baseline_r1_hits, "tuner lost to baseline");
  }
  // Planted dev and test splits with answers at baseline rank 2.
  SynthSpec spec;
  spec.n_dialogues = 500;
  spec.n_candidates = 10;
  spec.p_plant = 1.0;
  spec.answer_rank = 2;
  spec.seed = 41;
  auto dev = generate(spec);
  spec.seed = 42;
  auto test = generate(spec);
  std::vector<Dialogue> both = dev.dialogues;
  both.insert(both.end(), test.dialogues.begin(), test.dialogues.end());
  auto stats = build_stats(both);
  const auto lists = builtin_filter_lists();
  auto res = tune(dev.dialogues, dev.scores, stats, lists, TuneSpec{}, 0);
  require(res.trace[res.best_index].r1 == 100.0,
          "planted dev R@1 " + std::to_string(res.trace[res.best_index].r1));
  std::vector<int> k1{1};
  const double before = evaluate(baseline_run(test, stats), test.dialogues, k1).recall_at.at(1);
  const double after =
      evaluate(rerank_corpus(test.dialogues, test.scores, stats, lists, res.best),
               test.dialogues, k1)
          .recall_at.at(1);
  require(after - before >= 40.0, "test gain " + std::to_string(after - before));
}

void check_scale_invariance() {
  auto s = generate(corpus_spec(55, 100));
  auto stats = build_stats(s.dialogues);
  const auto lists = builtin_filter_lists();
  std::mt19937_64 rng(1005);
  for (int i = 0; i < 20; ++i) {
    auto cfg = random_config(rng);
    auto run = rerank_corpus(s.dialogues, s.scores, stats, lists, cfg);
    for (double c : {0.1, 3.0, 17.0}) {
      RerankConfig scaled = cfg;
      scaled.w_g *= c;
      scaled.w_coor *= c;
      auto other = rerank_corpus(s.dialogues, s.scores, stats, lists, scaled);
      for (std::size_t d = 0; d < run.size(); ++d)
        require(ids(run[d]) == ids(other[d]), "ranking changed under scaling by " +
                                                  std::to_string(c));
    }
  }
}

void check_determinism() {
  using testing::quoted;
  testing::TempDir dir("acceptance");
  auto run = [&](const std::string& args) {
    auto r = testing::run_cli(args, dir);
    require(r.exit_code == 0, "coordrank " + args + " failed: " + r.err);
  };
  std::vector<std::string> outputs;
  for (const std::string tag : {"a1", "a8", "b1", "b8"}) {
    const std::string threads = tag.substr(1);
    const auto p = [&](const std::string& name) { return quoted(dir / (tag + "_" + name)); };
    run("synth --seed 9 --out-corpus " + p("c.jsonl") + " --out-scores " + p("s.tsv") +
        " --out-log " + p("log.tsv"));
    run("build-stats --threads " + threads + " --corpus " + p("c.jsonl") + " --out " +
        p("stats.tsv"));
    run("rerank --threads " + threads + " --corpus " + p("c.jsonl") + " --scores " +
        p("s.tsv") + " --stats " + p("stats.tsv") + " --out " + p("run.tsv"));
    run("evaluate --run " + p("run.tsv") + " --corpus " + p("c.jsonl") + " --out " +
        p("eval.json"));
    std::string all;
    for (const char* f : {"c.jsonl", "s.tsv", "log.tsv", "stats.tsv", "run.tsv", "eval.json"})
      all += testing::read_file(dir / (tag + "_" + f)) + '\x1f';
    all += testing::read_file(dir / "cli_stdout.txt");
    outputs.push_back(std::move(all));
  }
  for (std::size_t i = 1; i < outputs.size(); ++i)
    require(outputs[i] == outputs[0], "pipeline outputs differ between runs");
}

void check_reproduction_doc() {
  const auto path = std::filesystem::path(COORDRANK_SOURCE_DIR) / "REPRODUCTION.md";
  require(std::filesystem::exists(path), "REPRODUCTION.md missing");
  const std::string text = testing::read_file(path);
  for (const char* needle : {"Table 1", "Table 2", "Table 3", "coordrank rerank",
                             "coordrank evaluate", "coordrank analyze", "coordrank tune",
                             "coordrank build-stats"})
    require(text.find(needle) != std::string::npos,
            std::string("REPRODUCTION.md lacks \"") + needle + "\"");
}

struct Criterion {
  const char* name;
  double budget_s;  // 0: no runtime bound
  std::function<void()> check;
};

}  // namespace
}  // namespace coordrank

int main() {
  using namespace coordrank;
  const std::vector<Criterion> criteria{
      {"R@10 invariance (50 corpora x 20 configs)", 10.0, check_r10_invariance},
      {"Oracle equivalence (1000 dialogues x 24 configs)", 30.0, check_oracle_equivalence},
      {"Metric correctness", 0.0, check_metrics},
      {"Coordination and fusion unit vectors", 0.0, check_equation_vectors},
      {"Tuner safety and planted split", 120.0, check_tuner},
      {"Scale invariance of fusion", 0.0, check_scale_invariance},
      {"Determinism of the CLI pipeline", 0.0, check_determinism},
      {"REPRODUCTION.md maps every table to CLI invocations", 0.0, check_reproduction_doc},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      c.check();
    } catch (const Failure& f) {
      error = f.what;
    } catch (const std::exception& e) {
      error = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (error.empty() && c.budget_s > 0 && secs > c.budget_s)
      error = "took " + std::to_string(secs) + " s, budget " + std::to_string(c.budget_s) + " s";
    std::printf("[%s] %s (%.0f ms)%s%s\n", error.empty() ? "PASS" : "FAIL", c.name,
                secs * 1000.0, error.empty() ? "" : ": ", error.c_str());
    if (!error.empty()) ++failures;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
