#include "coordrank/corpus_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "coordrank/errors.h"
#include "json.hpp"

namespace coordrank {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

bool is_blank(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  });
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string_view chomp(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw DataError("write failed for " + path.string());
}

const std::string& require_string(const json& object, const char* key,
                                  const char* where) {
  auto it = object.find(key);
  if (it == object.end() || !it->is_string())
    throw DataError(std::string(where) + ": missing string field \"" + key +
                    "\"");
  return it->get_ref<const std::string&>();
}

// Throws DataError describing the first schema violation.
Dialogue dialogue_from_json(const json& record) {
  if (!record.is_object()) throw DataError("record is not an object");
  Dialogue d;
  d.id = require_string(record, "id", "dialogue");
  if (d.id.empty()) throw DataError("dialogue: empty id");

  auto context = record.find("context");
  if (context == record.end() || !context->is_array())
    throw DataError("dialogue " + d.id + ": missing array \"context\"");
  for (const auto& u : *context) {
    if (!u.is_object())
      throw DataError("dialogue " + d.id + ": context entry is not an object");
    d.context.push_back({require_string(u, "speaker", "utterance"),
                         require_string(u, "text", "utterance")});
  }

  auto candidates = record.find("candidates");
  if (candidates == record.end() || !candidates->is_array())
    throw DataError("dialogue " + d.id + ": missing array \"candidates\"");
  for (const auto& c : *candidates) {
    if (!c.is_object())
      throw DataError("dialogue " + d.id +
                      ": candidate entry is not an object");
    Candidate cand{require_string(c, "id", "candidate"),
                   require_string(c, "text", "candidate")};
    if (cand.id.empty())
      throw DataError("dialogue " + d.id + ": empty candidate id");
    d.candidates.push_back(std::move(cand));
  }

  auto answer = record.find("answer_id");
  if (answer != record.end() && !answer->is_null()) {
    if (!answer->is_string())
      throw DataError("dialogue " + d.id + ": answer_id must be string or null");
    d.answer_id = answer->get<std::string>();
  }
  return d;
}

std::string unique_candidate_id(const Dialogue& d, std::string base) {
  std::string id = base;
  for (int suffix = 1; d.find_candidate(id) != nullptr; ++suffix)
    id = base + "-" + std::to_string(suffix);
  return id;
}

enum class Verdict {
  kKeep,
  kMalformed,
  kDuplicateCandidate,
  kNoAnswer,
  kNoCandidates,
  kEmptyCandidate,
  kEmptyContext,
};

// Cleans one well-formed dialogue in place.
Verdict clean_dialogue(Dialogue& d, const CleaningPolicy& policy,
                       std::string* error) {
  std::unordered_set<std::string_view> ids;
  for (const auto& c : d.candidates)
    if (!ids.insert(c.id).second) return Verdict::kDuplicateCandidate;

  if (d.answer_id && d.find_candidate(*d.answer_id) == nullptr) {
    *error = "dialogue " + d.id + ": answer_id \"" + *d.answer_id +
             "\" names no candidate";
    return Verdict::kMalformed;
  }

  std::erase_if(d.context, [](const Utterance& u) { return is_blank(u.text); });

  if (!d.answer_id) {
    switch (policy.no_answer) {
      case NoAnswerPolicy::kDrop:
        return Verdict::kNoAnswer;
      case NoAnswerPolicy::kConvert: {
        if (d.context.empty()) return Verdict::kEmptyContext;
        Candidate answer{unique_candidate_id(d, "context-last"),
                         std::move(d.context.back().text)};
        d.context.pop_back();
        d.answer_id = answer.id;
        d.candidates.push_back(std::move(answer));
        break;
      }
      case NoAnswerPolicy::kKeep:
        break;
    }
  }

  if (d.candidates.empty()) return Verdict::kNoCandidates;
  for (const auto& c : d.candidates)
    if (is_blank(c.text)) return Verdict::kEmptyCandidate;
  if (d.context.empty()) return Verdict::kEmptyContext;
  return Verdict::kKeep;
}

class Cleaner {
 public:
  explicit Cleaner(const CleaningPolicy& policy) : policy_(policy) {}

  void malformed(std::string message) {
    if (policy_.strict) throw DataError(message);
    ++result_.report.records;
    ++result_.report.malformed;
    result_.report.errors.push_back(std::move(message));
  }

  void add(Dialogue d, std::string_view where) {
    ++result_.report.records;
    if (!seen_ids_.insert(d.id).second)
      throw DataError(std::string(where) + "duplicate dialogue id \"" + d.id +
                      "\"");
    const bool had_answer = d.answer_id.has_value();
    std::string error;
    Verdict verdict = clean_dialogue(d, policy_, &error);
    CleaningReport& r = result_.report;
    switch (verdict) {
      case Verdict::kKeep:
        if (!had_answer && policy_.no_answer == NoAnswerPolicy::kConvert)
          ++r.no_answer_converted;
        ++r.kept;
        result_.dialogues.push_back(std::move(d));
        return;
      case Verdict::kMalformed:
        --r.records;  // counted again by malformed()
        malformed(std::string(where) + error);
        return;
      case Verdict::kDuplicateCandidate: ++r.duplicate_candidate_id; break;
      case Verdict::kNoAnswer: ++r.no_answer_dropped; break;
      case Verdict::kNoCandidates: ++r.no_candidates; break;
      case Verdict::kEmptyCandidate: ++r.empty_candidate; break;
      case Verdict::kEmptyContext: ++r.empty_context; break;
    }
    r.dropped_ids.push_back(d.id);
  }

  LoadedCorpus take() { return std::move(result_); }

 private:
  CleaningPolicy policy_;
  LoadedCorpus result_;
  std::unordered_set<std::string> seen_ids_;
};

}  // namespace

const Candidate* Dialogue::find_candidate(std::string_view candidate_id) const {
  for (const auto& c : candidates)
    if (c.id == candidate_id) return &c;
  return nullptr;
}

bool ScoreTable::insert(std::string_view dialogue_id,
                        std::string_view candidate_id, double g) {
  auto dit = scores_.find(dialogue_id);
  if (dit == scores_.end())
    dit = scores_.emplace(std::string(dialogue_id),
                          std::map<std::string, double, std::less<>>{})
              .first;
  bool inserted = dit->second.emplace(std::string(candidate_id), g).second;
  if (inserted) ++size_;
  return inserted;
}

std::optional<double> ScoreTable::find(std::string_view dialogue_id,
                                       std::string_view candidate_id) const {
  auto dit = scores_.find(dialogue_id);
  if (dit == scores_.end()) return std::nullopt;
  auto cit = dit->second.find(candidate_id);
  if (cit == dit->second.end()) return std::nullopt;
  return cit->second;
}

double ScoreTable::at(std::string_view dialogue_id,
                      std::string_view candidate_id) const {
  auto g = find(dialogue_id, candidate_id);
  if (!g)
    throw DataError("no score for (" + std::string(dialogue_id) + ", " +
                    std::string(candidate_id) + ")");
  return *g;
}

std::size_t CleaningReport::dropped() const {
  return empty_candidate + empty_context + no_candidates +
         duplicate_candidate_id + no_answer_dropped + malformed;
}

NoAnswerPolicy parse_no_answer_policy(std::string_view name) {
  if (name == "drop") return NoAnswerPolicy::kDrop;
  if (name == "convert") return NoAnswerPolicy::kConvert;
  if (name == "keep") return NoAnswerPolicy::kKeep;
  throw UsageError("unknown no-answer policy \"" + std::string(name) +
                   "\" (expected drop, convert or keep)");
}

LoadedCorpus read_corpus(std::istream& in, const CleaningPolicy& policy) {
  Cleaner cleaner(policy);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    Dialogue d;
    try {
      d = dialogue_from_json(json::parse(line));
    } catch (const json::exception& e) {
      cleaner.malformed(where + e.what());
      continue;
    } catch (const DataError& e) {
      cleaner.malformed(where + e.what());
      continue;
    }
    cleaner.add(std::move(d), where);
  }
  return cleaner.take();
}

LoadedCorpus load_corpus(const std::filesystem::path& path,
                         const CleaningPolicy& policy) {
  auto in = open_input(path);
  try {
    return read_corpus(in, policy);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

LoadedCorpus clean_corpus(std::vector<Dialogue> dialogues,
                          const CleaningPolicy& policy) {
  Cleaner cleaner(policy);
  for (auto& d : dialogues) cleaner.add(std::move(d), "");
  return cleaner.take();
}

std::string dialogue_to_json(const Dialogue& d) {
  ordered_json record;
  record["id"] = d.id;
  record["context"] = ordered_json::array();
  for (const auto& u : d.context)
    record["context"].push_back({{"speaker", u.speaker}, {"text", u.text}});
  record["candidates"] = ordered_json::array();
  for (const auto& c : d.candidates)
    record["candidates"].push_back({{"id", c.id}, {"text", c.text}});
  record["answer_id"] =
      d.answer_id ? ordered_json(*d.answer_id) : ordered_json(nullptr);
  return record.dump();
}

void write_corpus(std::span<const Dialogue> dialogues, std::ostream& out) {
  for (const auto& d : dialogues) out << dialogue_to_json(d) << '\n';
}

void write_corpus(std::span<const Dialogue> dialogues,
                  const std::filesystem::path& path) {
  auto out = open_output(path);
  write_corpus(dialogues, out);
  finish_output(out, path);
}

ScoreTable read_scores(
    std::istream& in, std::span<const Dialogue> corpus,
    const std::set<std::string, std::less<>>& ignored_dialogues) {
  std::map<std::string_view, const Dialogue*> by_id;
  for (const auto& d : corpus) by_id.emplace(d.id, &d);

  ScoreTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = chomp(line);
    if (row.empty() || row.front() == '#') continue;
    const std::string where = "scores line " + std::to_string(line_no) + ": ";
    auto fields = split_tabs(row);
    if (fields.size() != 3)
      throw DataError(where + "expected 3 tab-separated fields, got " +
                      std::to_string(fields.size()));
    if (ignored_dialogues.contains(fields[0])) continue;

    double g = 0.0;
    auto [end, ec] = std::from_chars(fields[2].data(),
                                     fields[2].data() + fields[2].size(), g);
    if (ec != std::errc() || end != fields[2].data() + fields[2].size() ||
        !std::isfinite(g))
      throw DataError(where + "unparsable score \"" + std::string(fields[2]) +
                      "\"");
    if (g < 0.0 || g > 1.0)
      throw DataError(where + "score " + std::string(fields[2]) +
                      " outside [0,1] for (" + std::string(fields[0]) + ", " +
                      std::string(fields[1]) + ")");

    auto dit = by_id.find(fields[0]);
    if (dit == by_id.end())
      throw DataError(where + "unknown dialogue \"" + std::string(fields[0]) +
                      "\"");
    if (dit->second->find_candidate(fields[1]) == nullptr)
      throw DataError(where + "unknown candidate \"" + std::string(fields[1]) +
                      "\" in dialogue \"" + std::string(fields[0]) + "\"");
    if (!table.insert(fields[0], fields[1], g))
      throw DataError(where + "duplicate score for (" +
                      std::string(fields[0]) + ", " + std::string(fields[1]) +
                      ")");
  }

  for (const auto& d : corpus)
    for (const auto& c : d.candidates)
      if (!table.find(d.id, c.id))
        throw DataError("missing score for (" + d.id + ", " + c.id + ")");
  return table;
}

ScoreTable load_scores(
    const std::filesystem::path& path, std::span<const Dialogue> corpus,
    const std::set<std::string, std::less<>>& ignored_dialogues) {
  auto in = open_input(path);
  try {
    return read_scores(in, corpus, ignored_dialogues);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_scores(const ScoreTable& scores, std::span<const Dialogue> corpus,
                  std::ostream& out) {
  char buf[64];
  for (const auto& d : corpus)
    for (const auto& c : d.candidates) {
      double g = scores.at(d.id, c.id);
      auto res = std::to_chars(buf, buf + sizeof buf, g);
      out << d.id << '\t' << c.id << '\t' << std::string_view(buf, res.ptr)
          << '\n';
    }
}

void write_scores(const ScoreTable& scores, std::span<const Dialogue> corpus,
                  const std::filesystem::path& path) {
  auto out = open_output(path);
  write_scores(scores, corpus, out);
  finish_output(out, path);
}

std::string format_fixed6(double value) {
  char buf[64];
  // -0.000000 and 0.000000 must render identically.
  if (value == 0.0) value = 0.0;
  auto res = std::to_chars(buf, buf + sizeof buf, value,
                           std::chars_format::fixed, 6);
  std::string out(buf, res.ptr);
  if (out == "-0.000000") out = "0.000000";
  return out;
}

void write_run(const RankedRun& run, std::ostream& out,
               std::string_view header) {
  if (!header.empty()) out << "# " << header << '\n';
  for (const auto& entry : run)
    for (const auto& rc : entry.ranking)
      out << entry.dialogue_id << '\t' << rc.rank << '\t' << rc.candidate_id
          << '\t' << format_fixed6(rc.s) << '\t' << format_fixed6(rc.g) << '\t'
          << format_fixed6(rc.coor) << '\n';
}

void write_run(const RankedRun& run, const std::filesystem::path& path,
               std::string_view header) {
  auto out = open_output(path);
  write_run(run, out, header);
  finish_output(out, path);
}

RankedRun read_run(std::istream& in) {
  RankedRun run;
  std::unordered_set<std::string> finished;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = chomp(line);
    if (row.empty() || row.front() == '#') continue;
    const std::string where = "run line " + std::to_string(line_no) + ": ";
    auto fields = split_tabs(row);
    if (fields.size() != 6)
      throw DataError(where + "expected 6 tab-separated fields, got " +
                      std::to_string(fields.size()));
    RankedCandidate rc;
    auto parse_int = [&](std::string_view f, int& v) {
      auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || end != f.data() + f.size())
        throw DataError(where + "bad integer \"" + std::string(f) + "\"");
    };
    auto parse_real = [&](std::string_view f, double& v) {
      auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || end != f.data() + f.size() || !std::isfinite(v))
        throw DataError(where + "bad real \"" + std::string(f) + "\"");
    };
    parse_int(fields[1], rc.rank);
    rc.candidate_id = std::string(fields[2]);
    parse_real(fields[3], rc.s);
    parse_real(fields[4], rc.g);
    parse_real(fields[5], rc.coor);

    if (run.empty() || run.back().dialogue_id != fields[0]) {
      if (!run.empty()) finished.insert(run.back().dialogue_id);
      if (finished.contains(std::string(fields[0])))
        throw DataError(where + "rows of dialogue \"" + std::string(fields[0]) +
                        "\" are not contiguous");
      run.push_back({std::string(fields[0]), {}});
    }
    run.back().ranking.push_back(std::move(rc));
  }
  validate_run(run);
  return run;
}

RankedRun load_run(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_run(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void validate_run(const RankedRun& run) {
  for (const auto& entry : run) {
    std::unordered_set<std::string_view> ids;
    for (std::size_t i = 0; i < entry.ranking.size(); ++i) {
      const auto& rc = entry.ranking[i];
      if (rc.rank != static_cast<int>(i) + 1)
        throw DataError("dialogue \"" + entry.dialogue_id + "\": rank " +
                        std::to_string(rc.rank) + " at position " +
                        std::to_string(i + 1));
      if (!ids.insert(rc.candidate_id).second)
        throw DataError("dialogue \"" + entry.dialogue_id +
                        "\": candidate \"" + rc.candidate_id +
                        "\" ranked twice");
      if (i > 0 && rc.s > entry.ranking[i - 1].s)
        throw DataError("dialogue \"" + entry.dialogue_id +
                        "\": S increases at rank " + std::to_string(rc.rank));
    }
  }
}

}  // namespace coordrank
