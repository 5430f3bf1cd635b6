// coordrank: command-line front end.
//
// Exit status: 0 success, 1 usage error, 2 data or validation error.

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coordrank/config.h"
#include "coordrank/corpus_io.h"
#include "coordrank/errors.h"
#include "coordrank/evaluation.h"
#include "coordrank/filter_lists.h"
#include "coordrank/reranker.h"
#include "coordrank/synth.h"
#include "coordrank/textnorm.h"
#include "coordrank/tuner.h"
#include "coordrank/vocab_stats.h"

namespace {

using namespace coordrank;

constexpr const char* kCommands =
    "normalize, build-stats, rerank, evaluate, analyze, tune, synth";

// Options shared by commands that score coordination.
struct FilterFlags {
  std::string stopwords, interjections, number_words;

  void add(CLI::App* cmd) {
    cmd->add_option("--stopwords", stopwords, "Stopword list replacing the built-in one")
        ->check(CLI::ExistingFile);
    cmd->add_option("--interjections", interjections,
                    "Interjection list replacing the built-in one")
        ->check(CLI::ExistingFile);
    cmd->add_option("--number-words", number_words,
                    "Number-word list replacing the built-in one")
        ->check(CLI::ExistingFile);
  }

  FilterLists resolve() const {
    FilterLists lists = builtin_filter_lists();
    auto replace = [](const std::string& path, MarkerSet& target) {
      if (path.empty()) return;
      FilterListFile file = load_filter_list(path);
      for (const auto& w : file.warnings) std::cerr << "warning: " << w << '\n';
      target = std::move(file.markers);
    };
    replace(stopwords, lists.stopwords);
    replace(interjections, lists.interjections);
    replace(number_words, lists.number_words);
    return lists;
  }
};

// Optional per-field overrides of a config file.
struct ConfigFlags {
  std::string config_path;
  std::optional<double> w_g, w_coor, k, bypass_threshold;
  std::optional<int> top_n, common_cutoff;

  void add(CLI::App* cmd, bool require_file) {
    auto* opt = cmd->add_option("--config", config_path, "RerankConfig JSON file")
                    ->check(CLI::ExistingFile);
    if (require_file) opt->required();
    cmd->add_option("--w-g", w_g, "Override w_g");
    cmd->add_option("--w-coor", w_coor, "Override w_coor");
    cmd->add_option("--k", k, "Override K");
    cmd->add_option("--bypass-threshold", bypass_threshold, "Override bypass_threshold");
    cmd->add_option("--top-n", top_n, "Override top_n");
    cmd->add_option("--common-cutoff", common_cutoff, "Override common_cutoff");
  }

  RerankConfig resolve() const {
    RerankConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (w_g) cfg.w_g = *w_g;
    if (w_coor) cfg.w_coor = *w_coor;
    if (k) cfg.k = *k;
    if (bypass_threshold) cfg.bypass_threshold = *bypass_threshold;
    if (top_n) cfg.top_n = *top_n;
    if (common_cutoff) cfg.common_cutoff = *common_cutoff;
    cfg.validate();
    return cfg;
  }
};

struct CorpusFlags {
  std::string no_answer = "drop";
  bool lenient = false;

  void add(CLI::App* cmd, const std::string& default_policy) {
    no_answer = default_policy;
    cmd->add_option("--no-answer", no_answer,
                    "Dialogues without an answer: drop, convert or keep")
        ->capture_default_str();
    cmd->add_flag("--lenient", lenient, "Skip malformed records instead of failing");
  }

  CleaningPolicy policy() const {
    return CleaningPolicy{parse_no_answer_policy(no_answer), !lenient};
  }
};

std::string list_fingerprint(const FilterLists& lists) {
  std::string all;
  for (const MarkerSet* set : {&lists.stopwords, &lists.interjections, &lists.number_words}) {
    for (const auto& m : *set) all += m + '\n';
    all += '\x1f';
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(all)));
  return buf;
}

// Effective parameters; thread count and file paths are deliberately absent
// so that the header is identical across machines.
std::string repro_header(std::string_view command, const RerankConfig& cfg,
                         const FilterLists& lists, std::string_view no_answer) {
  return "coordrank " COORDRANK_VERSION " " + std::string(command) +
         " config_hash=" + config_hash(cfg) + " " + config_fingerprint(cfg) +
         " filter_lists=" + list_fingerprint(lists) +
         " no_answer=" + std::string(no_answer);
}

LoadedCorpus load_reported(const std::string& path, const CleaningPolicy& policy) {
  LoadedCorpus corpus = load_corpus(path, policy);
  const CleaningReport& r = corpus.report;
  std::cerr << path << ": " << r.records << " records, " << r.kept << " kept, "
            << r.dropped() << " dropped";
  if (r.malformed > 0) std::cerr << ", " << r.malformed << " malformed";
  std::cerr << '\n';
  for (const auto& e : r.errors) std::cerr << "warning: " << e << '\n';
  return corpus;
}

std::set<std::string, std::less<>> dropped_ids(const CleaningReport& r) {
  return {r.dropped_ids.begin(), r.dropped_ids.end()};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw DataError("write failed for " + path);
}

// ---------------------------------------------------------------------------

struct NormalizeCmd {
  std::string in_path;
  bool no_stem = false;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("normalize", "Normalize text, one line in, one line out");
    cmd->add_option("--in", in_path, "Input file (default: standard input)")
        ->check(CLI::ExistingFile);
    cmd->add_flag("--no-stem", no_stem, "Skip stemming");
    cmd->callback([this] { run(); });
  }

  void run() const {
    std::ifstream file;
    std::istream* in = &std::cin;
    if (!in_path.empty()) {
      file.open(in_path, std::ios::binary);
      if (!file) throw DataError("cannot open " + in_path);
      in = &file;
    }
    NormalizeOptions options;
    options.stem = !no_stem;
    std::string line;
    while (std::getline(*in, line)) std::cout << render_tokens(normalize(line, options)) << '\n';
  }
};

struct BuildStatsCmd {
  std::vector<std::string> corpora;
  std::string extra_path, out_path;
  unsigned threads = 0;
  CorpusFlags corpus_flags;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("build-stats", "Count marker statistics over corpora");
    cmd->add_option("--corpus", corpora, "Dialogue JSONL (repeatable)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--extra-candidates", extra_path,
                    "TSV of dialogue_id<TAB>text response-side texts")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", out_path, "Statistics snapshot to write")->required();
    cmd->add_option("--threads", threads, "Worker threads (0: all cores)");
    corpus_flags.add(cmd, "keep");
    cmd->callback([this] { run(); });
  }

  void run() const {
    std::vector<Dialogue> all;
    for (const auto& path : corpora) {
      LoadedCorpus c = load_reported(path, corpus_flags.policy());
      for (auto& d : c.dialogues) all.push_back(std::move(d));
    }
    std::vector<ExtraResponses> extra;
    if (!extra_path.empty()) extra = load_extra_responses(extra_path);
    VocabStats stats = build_stats(all, extra, threads);
    save_stats(stats, out_path);
    std::cout << "dialogues\t" << all.size() << "\ntokens\t" << stats.total_tokens
              << "\nmarkers\t" << stats.count_total.size() << '\n';
  }
};

struct RerankCmd {
  std::string corpus_path, scores_path, stats_path, out_path, explain_path;
  unsigned threads = 0;
  ConfigFlags config_flags;
  FilterFlags filter_flags;
  CorpusFlags corpus_flags;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("rerank", "Rerank N-best lists with coordination");
    cmd->add_option("--corpus", corpus_path, "Dialogue JSONL")->required()->check(CLI::ExistingFile);
    cmd->add_option("--scores", scores_path, "Baseline score TSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--stats", stats_path, "Statistics snapshot")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", out_path, "Run file to write")->required();
    cmd->add_option("--explain", explain_path, "Per-marker explanation TSV to write");
    cmd->add_option("--threads", threads, "Worker threads (0: all cores)");
    config_flags.add(cmd, false);
    filter_flags.add(cmd);
    corpus_flags.add(cmd, "drop");
    cmd->callback([this] { run(); });
  }

  void run() const {
    const RerankConfig cfg = config_flags.resolve();
    const FilterLists lists = filter_flags.resolve();
    LoadedCorpus corpus = load_reported(corpus_path, corpus_flags.policy());
    ScoreTable scores = load_scores(scores_path, corpus.dialogues, dropped_ids(corpus.report));
    VocabStats stats = load_stats(stats_path);

    const std::string header = repro_header("rerank", cfg, lists, corpus_flags.no_answer);
    std::cerr << "# " << header << '\n';
    RankedRun run = rerank_corpus(corpus.dialogues, scores, stats, lists, cfg, threads);
    write_run(run, std::filesystem::path(out_path), header);
    if (!explain_path.empty())
      write_explanations(explain_corpus(corpus.dialogues, scores, stats, lists, cfg),
                         explain_path);
    std::cout << "reranked\t" << run.size() << '\n';
  }
};

struct EvaluateCmd {
  std::string run_path, corpus_path, ks_text = "1,10", label = "run", out_path;
  CorpusFlags corpus_flags;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("evaluate", "Recall@k and MRR of a run");
    cmd->add_option("--run", run_path, "Run file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--corpus", corpus_path, "Dialogue JSONL")->required()->check(CLI::ExistingFile);
    cmd->add_option("--ks", ks_text, "Comma-separated recall cutoffs")->capture_default_str();
    cmd->add_option("--label", label, "Column label")->capture_default_str();
    cmd->add_option("--out", out_path, "JSON report to write");
    corpus_flags.add(cmd, "drop");
    cmd->callback([this] { run(); });
  }

  void run() const {
    const std::vector<int> ks = parse_ks(ks_text);
    LoadedCorpus corpus = load_reported(corpus_path, corpus_flags.policy());
    RankedRun run = load_run(run_path);
    const std::pair<std::string, EvalReport> column{label, evaluate(run, corpus.dialogues, ks)};
    std::cout << render_eval_table({&column, 1});
    if (!out_path.empty()) write_text(out_path, eval_report_json({&column, 1}));
  }
};

struct AnalyzeCmd {
  std::string baseline_path, rerank_path, corpus_path, stats_path, out_path;
  ConfigFlags config_flags;
  FilterFlags filter_flags;
  CorpusFlags corpus_flags;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "analyze", "Answer positions and cap/correction/new-error counts for two runs");
    cmd->add_option("--baseline", baseline_path, "Baseline run file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--rerank", rerank_path, "Reranked run file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--corpus", corpus_path, "Dialogue JSONL")->required()->check(CLI::ExistingFile);
    cmd->add_option("--stats", stats_path, "Statistics snapshot")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", out_path, "JSON report to write");
    config_flags.add(cmd, false);
    filter_flags.add(cmd);
    corpus_flags.add(cmd, "drop");
    cmd->callback([this] { run(); });
  }

  void run() const {
    const RerankConfig cfg = config_flags.resolve();
    const FilterLists lists = filter_flags.resolve();
    LoadedCorpus corpus = load_reported(corpus_path, corpus_flags.policy());
    VocabStats stats = load_stats(stats_path);
    RankedRun baseline = load_run(baseline_path);
    RankedRun reranked = load_run(rerank_path);

    std::cerr << "# " << repro_header("analyze", cfg, lists, corpus_flags.no_answer) << '\n';
    const std::vector<int> ks{1, 10};
    const std::vector<std::pair<std::string, EvalReport>> positions{
        {"Baseline", evaluate(baseline, corpus.dialogues, ks)},
        {"Rerank", evaluate(reranked, corpus.dialogues, ks)}};
    const FilterLists eff = effective_filters(lists, stats, cfg.common_cutoff);
    const DiffReport diff =
        diff_runs(baseline, reranked, corpus.dialogues, stats, eff, cfg.coord_params());
    const std::pair<std::string, DiffReport> diff_column{"Rerank", diff};

    std::cout << render_position_table(positions) << '\n'
              << render_diff_table({&diff_column, 1});
    if (!out_path.empty()) write_text(out_path, diff_report_json(diff, positions));
  }
};

struct TuneCmd {
  std::string corpus_path, scores_path, stats_path, grid_path, out_path, trace_path;
  unsigned threads = 0;
  FilterFlags filter_flags;
  CorpusFlags corpus_flags;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("tune", "Grid-search a RerankConfig on a dev split");
    cmd->add_option("--dev-corpus", corpus_path, "Dev dialogue JSONL")->required()->check(CLI::ExistingFile);
    cmd->add_option("--dev-scores", scores_path, "Dev baseline score TSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--stats", stats_path, "Statistics snapshot")->required()->check(CLI::ExistingFile);
    cmd->add_option("--grid", grid_path, "Grid JSON (default grid when absent)")->check(CLI::ExistingFile);
    cmd->add_option("--out", out_path, "Best config JSON to write")->required();
    cmd->add_option("--trace", trace_path, "Trace TSV to write");
    cmd->add_option("--threads", threads, "Worker threads (0: all cores)");
    filter_flags.add(cmd);
    corpus_flags.add(cmd, "drop");
    cmd->callback([this] { run(); });
  }

  void run() const {
    const TuneSpec spec = grid_path.empty() ? TuneSpec{} : load_tune_spec(grid_path);
    spec.validate();
    const FilterLists lists = filter_flags.resolve();
    LoadedCorpus corpus = load_reported(corpus_path, corpus_flags.policy());
    ScoreTable scores = load_scores(scores_path, corpus.dialogues, dropped_ids(corpus.report));
    VocabStats stats = load_stats(stats_path);

    TuneResult result = tune(corpus.dialogues, scores, stats, lists, spec, threads);
    save_config(result.best, out_path);
    if (!trace_path.empty()) write_trace(result, std::filesystem::path(trace_path));
    const TracePoint& best = result.trace[result.best_index];
    std::cerr << "# " << repro_header("tune", result.best, lists, corpus_flags.no_answer)
              << '\n';
    std::cout << "grid_points\t" << result.trace.size() << "\nbaseline_R@1\t"
              << format_fixed6(result.baseline_r1) << "\nbaseline_MRR\t"
              << format_fixed6(result.baseline_mrr) << "\nbest_R@1\t"
              << format_fixed6(best.r1) << "\nbest_MRR\t" << format_fixed6(best.mrr)
              << "\nbest\t" << config_fingerprint(result.best) << '\n';
  }
};

struct SynthCmd {
  std::string spec_path, corpus_path, scores_path, log_path;
  std::optional<std::uint64_t> seed;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("synth", "Generate a seeded synthetic corpus");
    cmd->add_option("--spec", spec_path, "SynthSpec JSON (defaults when absent)")->check(CLI::ExistingFile);
    cmd->add_option("--seed", seed, "Override the seed given by --spec");
    cmd->add_option("--out-corpus", corpus_path, "Dialogue JSONL to write")->required();
    cmd->add_option("--out-scores", scores_path, "Score TSV to write")->required();
    cmd->add_option("--out-log", log_path, "Plant log TSV to write");
    cmd->callback([this] { run(); });
  }

  void run() const {
    SynthSpec spec = spec_path.empty() ? SynthSpec{} : load_synth_spec(spec_path);
    if (seed) spec.seed = *seed;
    SynthCorpus corpus = generate(spec);
    write_corpus(corpus.dialogues, std::filesystem::path(corpus_path));
    write_scores(corpus.scores, corpus.dialogues, std::filesystem::path(scores_path));
    if (!log_path.empty()) write_plant_log(corpus, spec, std::filesystem::path(log_path));
    std::size_t planted = 0;
    for (const auto& p : corpus.plants) planted += p.planted ? 1 : 0;
    std::cout << "dialogues\t" << corpus.dialogues.size() << "\nplanted\t" << planted
              << '\n';
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coordrank: rerank N-best dialogue responses by lexical coordination"};
  app.set_version_flag("--version", COORDRANK_VERSION);
  app.require_subcommand(1);

  NormalizeCmd normalize_cmd;
  BuildStatsCmd build_stats_cmd;
  RerankCmd rerank_cmd;
  EvaluateCmd evaluate_cmd;
  AnalyzeCmd analyze_cmd;
  TuneCmd tune_cmd;
  SynthCmd synth_cmd;
  normalize_cmd.add(app);
  build_stats_cmd.add(app);
  rerank_cmd.add(app);
  evaluate_cmd.add(app);
  analyze_cmd.add(app);
  tune_cmd.add(app);
  synth_cmd.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "commands: " << kCommands << '\n';
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
