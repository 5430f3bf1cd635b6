#include <gtest/gtest.h>

#include <sstream>

#include "coordrank/filter_lists.h"
#include "coordrank/textnorm.h"
#include "test_util.h"

namespace coordrank {
namespace {

TEST(BuiltinLists, ShippedFilesLoadCleanly) {
  for (const char* name : {"stopwords.txt", "interjections.txt", "number_words.txt"}) {
    auto file = load_filter_list(std::filesystem::path(COORDRANK_SOURCE_DIR) / "data" / name);
    EXPECT_TRUE(file.warnings.empty()) << name << ": " << file.warnings.front();
    EXPECT_FALSE(file.markers.empty()) << name;
  }
}

TEST(BuiltinLists, HoldNormalizedForms) {
  const FilterLists lists = builtin_filter_lists();
  for (const char* w : {"the", "i", "thi", "wa", "don", "t", "becaus"})
    EXPECT_TRUE(lists.stopwords.contains(w)) << w;
  for (const char* w : {"lol", "hei", "okai", "thank"})
    EXPECT_TRUE(lists.interjections.contains(w)) << w;
  for (const char* w : {"on", "two", "twenti", "hundr"})
    EXPECT_TRUE(lists.number_words.contains(w)) << w;
  EXPECT_TRUE(lists.common_words.empty());
}

TEST(BuiltinLists, RawWordsAreFilteredAfterNormalization) {
  const FilterLists lists = builtin_filter_lists();
  for (const char* text : {"This", "was", "Because", "Twenty", "Thanks", "ourselves"})
    EXPECT_TRUE(marker_types(normalize(text), lists).empty()) << text;
}

TEST(ReadFilterList, CommentsBlankLinesAndWarnings) {
  std::istringstream in("# header\n\nthe\nRunning  # trailing comment\n  okay \n1024\n");
  auto file = read_filter_list(in, "test");
  EXPECT_EQ(file.markers, (MarkerSet{"the", "run", "okai"}));
  ASSERT_EQ(file.warnings.size(), 1u);
  EXPECT_NE(file.warnings[0].find("test:6"), std::string::npos);
  EXPECT_NE(file.warnings[0].find("<number>"), std::string::npos);
}

// Stemming is not idempotent, so loading must start from surface forms.
TEST(ReadFilterList, SurfaceFormsMatchRuntimeMarkers) {
  std::istringstream in("because\nplease\ndon't\n");
  auto file = read_filter_list(in, "test");
  EXPECT_EQ(file.markers, (MarkerSet{"becaus", "pleas", "don", "t"}));
}

TEST(ReadFilterList, CategoryTokensAreNotStored) {
  std::istringstream in("42\nhttp://x.org\nword\n");
  auto file = read_filter_list(in, "test");
  EXPECT_EQ(file.markers, (MarkerSet{"word"}));
  EXPECT_EQ(file.warnings.size(), 2u);
}

TEST(FilterLists, UnionOfAllFour) {
  FilterLists f;
  f.stopwords = {"a"};
  f.interjections = {"b"};
  f.number_words = {"c"};
  f.common_words = {"d"};
  for (const char* m : {"a", "b", "c", "d"}) EXPECT_TRUE(f.contains(m));
  EXPECT_FALSE(f.contains("e"));
}

TEST(FilterListsProperty, MarkerTypesDisjointFromFilters) {
  const FilterLists lists = builtin_filter_lists();
  std::istringstream in(testing::read_file(testing::data_path("text_sample.txt")));
  std::string line;
  while (std::getline(in, line))
    for (const auto& m : marker_types(normalize(line), lists))
      EXPECT_FALSE(lists.contains(m)) << m;
}

TEST(LoadFilterList, MissingFileIsDataError) {
  EXPECT_ANY_THROW(load_filter_list("/nonexistent/list.txt"));
}

}  // namespace
}  // namespace coordrank
