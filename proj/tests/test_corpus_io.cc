#include <gtest/gtest.h>

#include <sstream>

#include "coordrank/corpus_io.h"
#include "coordrank/errors.h"
#include "coordrank/synth.h"
#include "test_util.h"

namespace coordrank {
namespace {

using testing::make_dialogue;

LoadedCorpus read_text(const std::string& text, CleaningPolicy policy = {}) {
  std::istringstream in(text);
  return read_corpus(in, policy);
}

std::vector<Dialogue> small_corpus() {
  return {make_dialogue("d1", {"hello there"}, {{"a", "hi"}, {"b", "bye"}, {"c", "ok"}}, "a"),
          make_dialogue("d2", {"x", "y"}, {{"a", "p"}, {"b", "q"}}, "b")};
}

TEST(LoadCorpus, EmptyCandidateDropsTheDialogue) {
  auto r = read_text(
      R"({"id":"d","context":[{"speaker":"s","text":"hi"}],"candidates":[{"id":"a","text":"  "},{"id":"b","text":"ok"}],"answer_id":"b"})"
      "\n");
  EXPECT_TRUE(r.dialogues.empty());
  EXPECT_EQ(r.report.records, 1u);
  EXPECT_EQ(r.report.dropped(), 1u);
  EXPECT_EQ(r.report.empty_candidate, 1u);
  EXPECT_EQ(r.report.dropped_ids, std::vector<std::string>{"d"});
}

TEST(LoadCorpus, EmptyFile) {
  auto r = read_text("");
  EXPECT_TRUE(r.dialogues.empty());
  EXPECT_EQ(r.report, CleaningReport{});
}

TEST(LoadCorpus, ConvertNoAnswerUsesLastContextUtterance) {
  const std::string rec =
      R"({"id":"d","context":[{"speaker":"a","text":"first"},{"speaker":"b","text":"second"}],"candidates":[{"id":"x","text":"other"}],"answer_id":null})"
      "\n";
  auto r = read_text(rec, {NoAnswerPolicy::kConvert, true});
  ASSERT_EQ(r.dialogues.size(), 1u);
  const Dialogue& d = r.dialogues[0];
  ASSERT_EQ(d.context.size(), 1u);
  EXPECT_EQ(d.context[0].text, "first");
  ASSERT_TRUE(d.answer_id);
  const Candidate* answer = d.find_candidate(*d.answer_id);
  ASSERT_NE(answer, nullptr);
  EXPECT_EQ(answer->text, "second");
  EXPECT_EQ(r.report.no_answer_converted, 1u);
}

TEST(LoadCorpus, ConvertAvoidsCandidateIdClash) {
  auto d = make_dialogue("d", {"a", "b"}, {{"context-last", "x"}});
  auto r = clean_corpus({d}, {NoAnswerPolicy::kConvert, true});
  ASSERT_EQ(r.dialogues.size(), 1u);
  EXPECT_EQ(*r.dialogues[0].answer_id, "context-last-1");
}

TEST(LoadCorpus, ConvertWithSingleUtteranceLeavesEmptyContext) {
  auto r = clean_corpus({make_dialogue("d", {"only"}, {{"a", "x"}})},
                        {NoAnswerPolicy::kConvert, true});
  EXPECT_TRUE(r.dialogues.empty());
  EXPECT_EQ(r.report.empty_context, 1u);
}

TEST(LoadCorpus, NoAnswerPolicies) {
  auto d = make_dialogue("d", {"a", "b"}, {{"x", "y"}});
  EXPECT_EQ(clean_corpus({d}, {NoAnswerPolicy::kDrop, true}).report.no_answer_dropped, 1u);
  auto kept = clean_corpus({d}, {NoAnswerPolicy::kKeep, true});
  ASSERT_EQ(kept.dialogues.size(), 1u);
  EXPECT_FALSE(kept.dialogues[0].answer_id);
}

TEST(LoadCorpus, BlankUtterancesAreRemoved) {
  auto r = clean_corpus({make_dialogue("d", {" ", "real", "\t"}, {{"a", "x"}}, "a")});
  ASSERT_EQ(r.dialogues.size(), 1u);
  ASSERT_EQ(r.dialogues[0].context.size(), 1u);
  EXPECT_EQ(r.dialogues[0].context[0].text, "real");
}

TEST(LoadCorpus, DropReasons) {
  auto r = clean_corpus({
      make_dialogue("ctx", {"  "}, {{"a", "x"}}, "a"),
      make_dialogue("none", {"hi"}, {}),
      make_dialogue("dup", {"hi"}, {{"a", "x"}, {"a", "y"}}, "a"),
  }, {NoAnswerPolicy::kKeep, true});
  EXPECT_TRUE(r.dialogues.empty());
  EXPECT_EQ(r.report.empty_context, 1u);
  EXPECT_EQ(r.report.no_candidates, 1u);
  EXPECT_EQ(r.report.duplicate_candidate_id, 1u);
  EXPECT_EQ(r.report.dropped(), 3u);
}

TEST(LoadCorpus, DuplicateDialogueIdIsFatal) {
  auto d = make_dialogue("d", {"hi"}, {{"a", "x"}}, "a");
  EXPECT_THROW(clean_corpus({d, d}), DataError);
  EXPECT_THROW(clean_corpus({d, d}, {NoAnswerPolicy::kDrop, false}), DataError);
}

TEST(LoadCorpus, MalformedRecordStrictAndLenient) {
  const std::string text =
      "{not json\n"
      R"({"id":"d","context":[{"speaker":"s","text":"hi"}],"candidates":[{"id":"a","text":"x"}],"answer_id":"zzz"})"
      "\n"
      R"({"id":"ok","context":[{"speaker":"s","text":"hi"}],"candidates":[{"id":"a","text":"x"}],"answer_id":"a"})"
      "\n";
  EXPECT_THROW(read_text(text), DataError);
  auto r = read_text(text, {NoAnswerPolicy::kDrop, false});
  ASSERT_EQ(r.dialogues.size(), 1u);
  EXPECT_EQ(r.report.malformed, 2u);
  EXPECT_EQ(r.report.records, 3u);
  ASSERT_EQ(r.report.errors.size(), 2u);
  EXPECT_NE(r.report.errors[0].find("line 1"), std::string::npos);
  EXPECT_NE(r.report.errors[1].find("zzz"), std::string::npos);
}

TEST(LoadCorpus, UbuntuSample) {
  auto r = load_corpus(testing::data_path("ubuntu_sample.jsonl"));
  EXPECT_EQ(r.report.records, 7u);
  EXPECT_EQ(r.report.kept, 4u);
  EXPECT_EQ(r.report.empty_candidate, 1u);
  EXPECT_EQ(r.report.no_answer_dropped, 1u);
  EXPECT_EQ(r.report.duplicate_candidate_id, 1u);
  EXPECT_EQ(r.report.dropped_ids, (std::vector<std::string>{"u02", "u03", "u06"}));
  ASSERT_EQ(r.dialogues[2].id, "u05");
  EXPECT_EQ(r.dialogues[2].context.size(), 1u);
}

TEST(CorpusProperty, RoundTrip) {
  auto corpus = generate(SynthSpec{.seed = 3, .n_dialogues = 30}).dialogues;
  corpus[0].answer_id.reset();
  corpus[1].context[0].text = "unicode \xc3\xa9 and \"quotes\"\t\\";
  std::stringstream buf;
  write_corpus(corpus, buf);
  auto back = read_corpus(buf, {NoAnswerPolicy::kKeep, true});
  EXPECT_EQ(back.dialogues, corpus);
}

TEST(CorpusProperty, CleaningIsIdempotent) {
  auto first = load_corpus(testing::data_path("ubuntu_sample.jsonl"));
  auto second = clean_corpus(first.dialogues);
  EXPECT_EQ(second.dialogues, first.dialogues);
  EXPECT_EQ(second.report.dropped(), 0u);
}

TEST(Scores, ExactJoin) {
  std::vector<Dialogue> corpus{small_corpus()[0]};
  std::istringstream in("d1\ta\t0.5\nd1\tb\t0.25\nd1\tc\t1\n");
  auto t = read_scores(in, corpus);
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.at("d1", "b"), 0.25);
}

TEST(Scores, OutOfRangeNamesTheRow) {
  std::vector<Dialogue> corpus{small_corpus()[0]};
  std::istringstream in("d1\ta\t0.5\nd1\tb\t1.2\nd1\tc\t0\n");
  try {
    read_scores(in, corpus);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("(d1, b)"), std::string::npos);
  }
}

TEST(Scores, MissingPairIsNamed) {
  std::vector<Dialogue> corpus{small_corpus()[0]};
  std::istringstream in("d1\ta\t0.5\nd1\tb\t0.3\n");
  try {
    read_scores(in, corpus);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("missing score for (d1, c)"), std::string::npos);
  }
}

TEST(Scores, Rejections) {
  auto corpus = small_corpus();
  auto bad = [&](const std::string& text) {
    std::istringstream in(text);
    EXPECT_THROW(read_scores(in, corpus), DataError) << text;
  };
  bad("d1\ta\n");
  bad("d1\ta\t0.1\textra\n");
  bad("d1\ta\tnan\n");
  bad("d1\ta\tabc\n");
  bad("d1\ta\t-0.1\n");
  bad("dx\ta\t0.1\n");
  bad("d1\tz\t0.1\n");
  bad("d1\ta\t0.1\nd1\ta\t0.2\n");
}

TEST(Scores, IgnoredDialoguesAreSkipped) {
  std::vector<Dialogue> corpus{small_corpus()[1]};
  std::istringstream in("gone\tq\t7\nd2\ta\t0.1\nd2\tb\t0.2\n");
  auto t = read_scores(in, corpus, {"gone"});
  EXPECT_EQ(t.size(), 2u);
}

TEST(Scores, UbuntuSampleJoinsAfterCleaning) {
  auto r = load_corpus(testing::data_path("ubuntu_sample.jsonl"));
  std::set<std::string, std::less<>> dropped(r.report.dropped_ids.begin(),
                                             r.report.dropped_ids.end());
  auto t = load_scores(testing::data_path("ubuntu_sample_scores.tsv"), r.dialogues, dropped);
  EXPECT_EQ(t.size(), 11u);
  EXPECT_THROW(load_scores(testing::data_path("ubuntu_sample_scores.tsv"), r.dialogues),
               DataError);
}

TEST(ScoresProperty, RoundTripIsExact) {
  auto synth = generate(SynthSpec{.seed = 9, .n_dialogues = 40});
  std::stringstream buf;
  write_scores(synth.scores, synth.dialogues, buf);
  EXPECT_EQ(read_scores(buf, synth.dialogues), synth.scores);
}

TEST(ScoresProperty, JoinIsTotal) {
  auto synth = generate(SynthSpec{.seed = 10, .n_dialogues = 25});
  std::stringstream buf;
  write_scores(synth.scores, synth.dialogues, buf);
  auto t = read_scores(buf, synth.dialogues);
  for (const auto& d : synth.dialogues)
    for (const auto& c : d.candidates) EXPECT_NO_THROW(t.at(d.id, c.id));
}

RankedRun one_row_run() {
  return {{"d", {{1, "c", 1.0, 1.0, 0.0}}}};
}

TEST(Run, FormattingContract) {
  std::ostringstream out;
  write_run(one_row_run(), out);
  EXPECT_EQ(out.str(), "d\t1\tc\t1.000000\t1.000000\t0.000000\n");
}

TEST(Run, EmptyRunIsEmptyFile) {
  std::ostringstream out;
  write_run({}, out);
  EXPECT_EQ(out.str(), "");
}

TEST(Run, SameRunSameBytes) {
  RankedRun run{{"d", {{1, "a", 0.7, 0.6, 0.2}, {2, "b", 0.3, 0.3, 0.0}}}};
  std::ostringstream a, b;
  write_run(run, a, "hdr");
  write_run(run, b, "hdr");
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().rfind("# hdr\n", 0), 0u);
}

TEST(Run, NegativeZeroRendersAsZero) {
  EXPECT_EQ(format_fixed6(-0.0), "0.000000");
  EXPECT_EQ(format_fixed6(-1e-9), "0.000000");
  EXPECT_EQ(format_fixed6(0.1234567), "0.123457");
}

TEST(RunProperty, RoundTrip) {
  RankedRun run{{"d1", {{1, "a", 0.712345, 0.5, 0.424690}, {2, "b", 0.3, 0.3, 0.0}}},
                {"d2", {{1, "x", 1.0, 1.0, 0.0}}}};
  std::stringstream buf;
  write_run(run, buf, "comment");
  EXPECT_EQ(read_run(buf), run);
}

TEST(Run, Validation) {
  auto bad = [](const std::string& text) {
    std::istringstream in(text);
    EXPECT_THROW(read_run(in), DataError) << text;
  };
  bad("d\t1\ta\t0.5\t0.5\n");                                       // 5 fields
  bad("d\t2\ta\t0.5\t0.5\t0\n");                                    // rank starts at 2
  bad("d\t1\ta\t0.5\t0.5\t0\nd\t2\ta\t0.4\t0.4\t0\n");              // repeated candidate
  bad("d\t1\ta\t0.5\t0.5\t0\nd\t2\tb\t0.6\t0.6\t0\n");              // S increases
  bad("d\t1\ta\t0.5\t0.5\t0\ne\t1\ta\t0.5\t0.5\t0\nd\t2\tb\t0.1\t0.1\t0\n");  // split rows
  bad("d\tx\ta\t0.5\t0.5\t0\n");
}

}  // namespace
}  // namespace coordrank
