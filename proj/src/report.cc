#include <algorithm>
#include <cstdio>
#include <set>

#include "coordrank/evaluation.h"
#include "json.hpp"

namespace coordrank {

namespace {

using Row = std::vector<std::string>;

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// First column left-aligned, the rest right-aligned, two spaces between.
std::string render(const Row& header, const std::vector<Row>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  auto widen = [&](const Row& r) {
    for (std::size_t i = 0; i < r.size(); ++i)
      width[i] = std::max(width[i], r[i].size());
  };
  widen(header);
  for (const auto& r : rows) widen(r);

  std::string out;
  auto emit = [&](const Row& r) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const std::string pad(width[i] - r[i].size(), ' ');
      if (i == 0) {
        line += r[i] + pad;
      } else {
        line += "  " + pad + r[i];
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  };
  emit(header);
  for (const auto& r : rows) emit(r);
  return out;
}

template <typename Report>
Row header_row(std::string first,
               std::span<const std::pair<std::string, Report>> columns) {
  Row header{std::move(first)};
  for (const auto& [label, report] : columns) header.push_back(label);
  return header;
}

}  // namespace

std::string render_eval_table(
    std::span<const std::pair<std::string, EvalReport>> columns) {
  std::set<int> ks;
  for (const auto& [label, r] : columns)
    for (const auto& [k, v] : r.recall_at) ks.insert(k);

  std::vector<Row> rows;
  for (int k : ks) {
    Row row{"R@" + std::to_string(k)};
    for (const auto& [label, r] : columns) {
      auto it = r.recall_at.find(k);
      row.push_back(it == r.recall_at.end() ? "-" : fixed2(it->second));
    }
    rows.push_back(std::move(row));
  }
  if (!columns.empty()) {
    Row mrr{"MRR"};
    for (const auto& [label, r] : columns) mrr.push_back(fixed2(100.0 * r.mrr));
    rows.push_back(std::move(mrr));
  }
  return render(header_row("", columns), rows);
}

std::string render_position_table(
    std::span<const std::pair<std::string, EvalReport>> columns) {
  std::set<int> ranks;
  for (const auto& [label, r] : columns)
    for (const auto& [rank, v] : r.position_histogram) ranks.insert(rank);

  std::vector<Row> rows;
  for (int rank : ranks) {
    Row row{std::to_string(rank)};
    for (const auto& [label, r] : columns) {
      auto it = r.position_histogram.find(rank);
      row.push_back(it == r.position_histogram.end() ? "-" : fixed2(it->second));
    }
    rows.push_back(std::move(row));
  }
  return render(header_row("Ranking", columns), rows);
}

std::string render_diff_table(
    std::span<const std::pair<std::string, DiffReport>> columns) {
  std::vector<Row> rows;
  if (!columns.empty()) {
    Row cap{"Cap"}, corrections{"Correction"}, new_errors{"New Error"};
    for (const auto& [label, d] : columns) {
      cap.push_back(std::to_string(d.cap));
      corrections.push_back(std::to_string(d.corrections));
      new_errors.push_back(std::to_string(d.new_errors));
    }
    rows = {cap, corrections, new_errors};
  }
  return render(header_row("", columns), rows);
}

namespace {

nlohmann::ordered_json eval_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["n_dialogues"] = r.n_dialogues;
  nlohmann::ordered_json recall = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.recall_at) recall[std::to_string(k)] = v;
  j["recall_at"] = recall;
  nlohmann::ordered_json hits = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.hits_at) hits[std::to_string(k)] = v;
  j["hits_at"] = hits;
  j["mrr"] = r.mrr;
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto& [rank, v] : r.position_histogram)
    hist[std::to_string(rank)] = v;
  j["position_histogram"] = hist;
  return j;
}

}  // namespace

std::string eval_report_json(
    std::span<const std::pair<std::string, EvalReport>> columns) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [label, r] : columns) j[label] = eval_json(r);
  return j.dump(2) + "\n";
}

std::string diff_report_json(
    const DiffReport& diff,
    std::span<const std::pair<std::string, EvalReport>> positions) {
  nlohmann::ordered_json j;
  j["dialogues"] = diff.dialogues;
  j["baseline_errors"] = diff.baseline_errors;
  j["baseline_correct"] = diff.baseline_correct;
  j["cap"] = diff.cap;
  j["corrections"] = diff.corrections;
  j["new_errors"] = diff.new_errors;
  nlohmann::ordered_json runs = nlohmann::ordered_json::object();
  for (const auto& [label, r] : positions) runs[label] = eval_json(r);
  j["runs"] = runs;
  return j.dump(2) + "\n";
}

}  // namespace coordrank
