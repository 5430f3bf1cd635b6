#include "coordrank/vocab_stats.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "coordrank/errors.h"
#include "coordrank/parallel.h"
#include "coordrank/textnorm.h"

namespace coordrank {

namespace {

constexpr std::string_view kSnapshotMagic = "coordrank-vocab-stats";
constexpr int kSnapshotVersion = 1;

void count_text(std::string_view text, bool response, VocabStats& stats) {
  for (auto& token : normalize(text)) {
    if (is_category_token(token)) continue;
    ++stats.total_tokens;
    if (response) ++stats.count_response[token];
    ++stats.count_total[std::move(token)];
  }
}

void count_dialogue(const Dialogue& d, VocabStats& stats) {
  for (const auto& u : d.context) count_text(u.text, false, stats);
  for (const auto& c : d.candidates) count_text(c.text, true, stats);
}

void add_counts(VocabStats& into, const VocabStats& other) {
  for (const auto& [m, n] : other.count_total) into.count_total[m] += n;
  for (const auto& [m, n] : other.count_response) into.count_response[m] += n;
  into.total_tokens += other.total_tokens;
}

std::uint64_t parse_count(std::string_view field, std::size_t line_no) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || end != field.data() + field.size())
    throw DataError("stats line " + std::to_string(line_no) + ": bad count \"" +
                    std::string(field) + "\"");
  return v;
}

}  // namespace

std::uint64_t VocabStats::total(std::string_view marker) const {
  auto it = count_total.find(std::string(marker));
  return it == count_total.end() ? 0 : it->second;
}

std::uint64_t VocabStats::response(std::string_view marker) const {
  auto it = count_response.find(std::string(marker));
  return it == count_response.end() ? 0 : it->second;
}

void rank_by_frequency(VocabStats& stats) {
  stats.freq_rank.clear();
  stats.freq_rank.reserve(stats.count_total.size());
  for (const auto& [m, n] : stats.count_total) stats.freq_rank.push_back(m);
  std::sort(stats.freq_rank.begin(), stats.freq_rank.end(),
            [&](const Marker& a, const Marker& b) {
              auto na = stats.count_total.at(a), nb = stats.count_total.at(b);
              return na != nb ? na > nb : a < b;
            });
}

VocabStats build_stats(std::span<const Dialogue> dialogues,
                       std::span<const ExtraResponses> extra_responses,
                       unsigned threads) {
  threads = resolve_threads(threads);
  const std::size_t shards =
      std::max<std::size_t>(1, std::min<std::size_t>(threads, dialogues.size()));
  std::vector<VocabStats> partial(shards);
  const std::size_t block = (dialogues.size() + shards - 1) / shards;
  parallel_for(shards, threads, [&](std::size_t s) {
    const std::size_t end = std::min(dialogues.size(), (s + 1) * block);
    for (std::size_t i = s * block; i < end; ++i)
      count_dialogue(dialogues[i], partial[s]);
  });

  VocabStats stats;
  for (const auto& p : partial) add_counts(stats, p);
  for (const auto& extra : extra_responses)
    for (const auto& text : extra.texts) count_text(text, true, stats);

  if (stats.total_tokens == 0)
    throw DataError("statistics corpus contains no countable tokens");
  rank_by_frequency(stats);
  return stats;
}

void merge_stats(VocabStats& into, const VocabStats& other) {
  add_counts(into, other);
  rank_by_frequency(into);
}

MarkerSet common_words(const VocabStats& stats, std::size_t n) {
  n = std::min(n, stats.freq_rank.size());
  return MarkerSet(stats.freq_rank.begin(), stats.freq_rank.begin() + n);
}

double response_probability(const VocabStats& stats, std::string_view marker,
                            double alpha) {
  const double response = static_cast<double>(stats.response(marker));
  const double total = static_cast<double>(stats.total(marker));
  return (response + alpha) / (total + alpha);
}

void validate_stats(const VocabStats& stats) {
  if (stats.count_total.empty()) throw DataError("stats: empty vocabulary");
  std::uint64_t sum = 0;
  for (const auto& [m, n] : stats.count_total) {
    if (m.empty()) throw DataError("stats: empty marker");
    if (n == 0) throw DataError("stats: zero count for \"" + m + "\"");
    sum += n;
  }
  if (sum != stats.total_tokens)
    throw DataError("stats: total_tokens " + std::to_string(stats.total_tokens) +
                    " does not equal the sum of counts " + std::to_string(sum));
  for (const auto& [m, n] : stats.count_response) {
    auto it = stats.count_total.find(m);
    if (it == stats.count_total.end() || n > it->second)
      throw DataError("stats: count_response exceeds count_total for \"" + m +
                      "\"");
  }
  if (stats.freq_rank.size() != stats.count_total.size())
    throw DataError("stats: freq_rank is not a permutation of the vocabulary");
  for (std::size_t i = 0; i < stats.freq_rank.size(); ++i) {
    auto it = stats.count_total.find(stats.freq_rank[i]);
    if (it == stats.count_total.end())
      throw DataError("stats: freq_rank names unknown marker \"" +
                      stats.freq_rank[i] + "\"");
    if (i > 0) {
      const auto& prev = stats.freq_rank[i - 1];
      auto prev_n = stats.count_total.at(prev);
      if (prev_n < it->second || (prev_n == it->second && !(prev < it->first)))
        throw DataError("stats: freq_rank out of order at \"" + it->first +
                        "\"");
    }
  }
}

void write_stats(const VocabStats& stats, std::ostream& out) {
  out << kSnapshotMagic << '\t' << kSnapshotVersion << '\n';
  out << "total_tokens\t" << stats.total_tokens << '\n';
  out << "markers\t" << stats.freq_rank.size() << '\n';
  for (const auto& m : stats.freq_rank)
    out << m << '\t' << stats.total(m) << '\t' << stats.response(m) << '\n';
}

void save_stats(const VocabStats& stats, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  write_stats(stats, out);
  out.flush();
  if (!out) throw DataError("write failed for " + path.string());
}

VocabStats read_stats(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&](const char* what) -> std::string_view {
    if (!std::getline(in, line))
      throw DataError(std::string("stats: truncated snapshot, expected ") + what);
    ++line_no;
    return line;
  };
  auto expect_field = [&](std::string_view row, std::string_view key) {
    auto tab = row.find('\t');
    if (tab == std::string_view::npos || row.substr(0, tab) != key)
      throw DataError("stats line " + std::to_string(line_no) + ": expected \"" +
                      std::string(key) + "\"");
    return row.substr(tab + 1);
  };

  std::string_view header = next("header");
  auto version = expect_field(header, kSnapshotMagic);
  if (version != std::to_string(kSnapshotVersion))
    throw DataError("stats: unsupported snapshot version \"" +
                    std::string(version) + "\"");

  VocabStats stats;
  stats.total_tokens = parse_count(expect_field(next("total_tokens"), "total_tokens"), line_no);
  const std::uint64_t markers = parse_count(expect_field(next("markers"), "markers"), line_no);
  stats.freq_rank.reserve(markers);
  for (std::uint64_t i = 0; i < markers; ++i) {
    std::string_view row = next("marker row");
    auto t1 = row.find('\t');
    auto t2 = t1 == std::string_view::npos ? t1 : row.find('\t', t1 + 1);
    if (t2 == std::string_view::npos || row.find('\t', t2 + 1) != std::string_view::npos)
      throw DataError("stats line " + std::to_string(line_no) +
                      ": expected marker<TAB>total<TAB>response");
    std::string marker(row.substr(0, t1));
    auto total = parse_count(row.substr(t1 + 1, t2 - t1 - 1), line_no);
    auto response = parse_count(row.substr(t2 + 1), line_no);
    if (!stats.count_total.emplace(marker, total).second)
      throw DataError("stats: duplicate marker \"" + marker + "\"");
    if (response > 0) stats.count_response.emplace(marker, response);
    stats.freq_rank.push_back(std::move(marker));
  }
  if (std::getline(in, line) && !line.empty())
    throw DataError("stats: trailing data after marker rows");
  validate_stats(stats);
  return stats;
}

VocabStats load_stats(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return read_stats(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::vector<ExtraResponses> load_extra_responses(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<ExtraResponses> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected dialogue_id<TAB>text");
    std::string id = line.substr(0, tab);
    if (out.empty() || out.back().dialogue_id != id) out.push_back({id, {}});
    out.back().texts.push_back(line.substr(tab + 1));
  }
  return out;
}

}  // namespace coordrank
