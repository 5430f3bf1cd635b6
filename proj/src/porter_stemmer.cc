#include "coordrank/porter_stemmer.h"

#include <array>
#include <utility>

namespace coordrank {

namespace {

bool is_plain_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// 'y' is a consonant at the start of a word or after a vowel.
bool is_consonant(std::string_view w, std::size_t i) {
  if (is_plain_vowel(w[i])) return false;
  if (w[i] == 'y') return i == 0 || !is_consonant(w, i - 1);
  return true;
}

// m in [C](VC){m}[V].
int measure(std::string_view stem) {
  int m = 0;
  bool prev_vowel = false;
  for (std::size_t i = 0; i < stem.size(); ++i) {
    bool consonant = is_consonant(stem, i);
    if (consonant && prev_vowel) ++m;
    prev_vowel = !consonant;
  }
  return m;
}

bool contains_vowel(std::string_view stem) {
  for (std::size_t i = 0; i < stem.size(); ++i)
    if (!is_consonant(stem, i)) return true;
  return false;
}

bool ends_double_consonant(std::string_view w) {
  std::size_t n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: stem ends consonant-vowel-consonant, last consonant not w, x or y.
bool ends_cvc(std::string_view w) {
  std::size_t n = w.size();
  return n >= 3 && is_consonant(w, n - 3) && !is_consonant(w, n - 2) &&
         is_consonant(w, n - 1) && w[n - 1] != 'w' && w[n - 1] != 'x' &&
         w[n - 1] != 'y';
}

enum class Cond { kNone, kMeasureGt0, kMeasureGt1, kMeasureGt1AndST };

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
  Cond cond;
};

bool holds(Cond cond, std::string_view stem) {
  switch (cond) {
    case Cond::kNone: return true;
    case Cond::kMeasureGt0: return measure(stem) > 0;
    case Cond::kMeasureGt1: return measure(stem) > 1;
    case Cond::kMeasureGt1AndST:
      return measure(stem) > 1 && (stem.back() == 's' || stem.back() == 't');
  }
  return false;
}

// The first rule whose suffix matches decides; a failed condition leaves the
// word unchanged.
template <std::size_t N>
std::string apply_rules(std::string word, const std::array<Rule, N>& rules) {
  for (const Rule& rule : rules) {
    if (!word.ends_with(rule.suffix)) continue;
    std::string_view stem(word.data(), word.size() - rule.suffix.size());
    if (!holds(rule.cond, stem)) return word;
    return std::string(stem).append(rule.replacement);
  }
  return word;
}

std::string step1a(std::string word) {
  static constexpr std::array<Rule, 4> kRules{{
      {"sses", "ss", Cond::kNone},
      {"ies", "i", Cond::kNone},
      {"ss", "ss", Cond::kNone},
      {"s", "", Cond::kNone},
  }};
  return apply_rules(std::move(word), kRules);
}

std::string step1b(std::string word) {
  if (word.ends_with("eed")) {
    std::string_view stem(word.data(), word.size() - 3);
    if (measure(stem) > 0) return std::string(stem) + "ee";
    return word;
  }
  std::string stem;
  bool removed = false;
  for (std::string_view suffix : {std::string_view("ed"), std::string_view("ing")}) {
    if (!word.ends_with(suffix)) continue;
    std::string_view candidate(word.data(), word.size() - suffix.size());
    if (contains_vowel(candidate)) {
      stem = std::string(candidate);
      removed = true;
      break;
    }
  }
  if (!removed) return word;

  if (stem.ends_with("at") || stem.ends_with("bl") || stem.ends_with("iz"))
    return stem + "e";
  if (ends_double_consonant(stem)) {
    char last = stem.back();
    if (last != 'l' && last != 's' && last != 'z') stem.pop_back();
    return stem;
  }
  if (measure(stem) == 1 && ends_cvc(stem)) return stem + "e";
  return stem;
}

std::string step1c(std::string word) {
  if (word.ends_with('y')) {
    std::string_view stem(word.data(), word.size() - 1);
    if (contains_vowel(stem)) return std::string(stem) + "i";
  }
  return word;
}

std::string step2(std::string word) {
  static constexpr std::array<Rule, 20> kRules{{
      {"ational", "ate", Cond::kMeasureGt0},
      {"tional", "tion", Cond::kMeasureGt0},
      {"enci", "ence", Cond::kMeasureGt0},
      {"anci", "ance", Cond::kMeasureGt0},
      {"izer", "ize", Cond::kMeasureGt0},
      {"abli", "able", Cond::kMeasureGt0},
      {"alli", "al", Cond::kMeasureGt0},
      {"entli", "ent", Cond::kMeasureGt0},
      {"eli", "e", Cond::kMeasureGt0},
      {"ousli", "ous", Cond::kMeasureGt0},
      {"ization", "ize", Cond::kMeasureGt0},
      {"ation", "ate", Cond::kMeasureGt0},
      {"ator", "ate", Cond::kMeasureGt0},
      {"alism", "al", Cond::kMeasureGt0},
      {"iveness", "ive", Cond::kMeasureGt0},
      {"fulness", "ful", Cond::kMeasureGt0},
      {"ousness", "ous", Cond::kMeasureGt0},
      {"aliti", "al", Cond::kMeasureGt0},
      {"iviti", "ive", Cond::kMeasureGt0},
      {"biliti", "ble", Cond::kMeasureGt0},
  }};
  return apply_rules(std::move(word), kRules);
}

std::string step3(std::string word) {
  static constexpr std::array<Rule, 7> kRules{{
      {"icate", "ic", Cond::kMeasureGt0},
      {"ative", "", Cond::kMeasureGt0},
      {"alize", "al", Cond::kMeasureGt0},
      {"iciti", "ic", Cond::kMeasureGt0},
      {"ical", "ic", Cond::kMeasureGt0},
      {"ful", "", Cond::kMeasureGt0},
      {"ness", "", Cond::kMeasureGt0},
  }};
  return apply_rules(std::move(word), kRules);
}

std::string step4(std::string word) {
  static constexpr std::array<Rule, 19> kRules{{
      {"al", "", Cond::kMeasureGt1},
      {"ance", "", Cond::kMeasureGt1},
      {"ence", "", Cond::kMeasureGt1},
      {"er", "", Cond::kMeasureGt1},
      {"ic", "", Cond::kMeasureGt1},
      {"able", "", Cond::kMeasureGt1},
      {"ible", "", Cond::kMeasureGt1},
      {"ant", "", Cond::kMeasureGt1},
      {"ement", "", Cond::kMeasureGt1},
      {"ment", "", Cond::kMeasureGt1},
      {"ent", "", Cond::kMeasureGt1},
      {"ion", "", Cond::kMeasureGt1AndST},
      {"ou", "", Cond::kMeasureGt1},
      {"ism", "", Cond::kMeasureGt1},
      {"ate", "", Cond::kMeasureGt1},
      {"iti", "", Cond::kMeasureGt1},
      {"ous", "", Cond::kMeasureGt1},
      {"ive", "", Cond::kMeasureGt1},
      {"ize", "", Cond::kMeasureGt1},
  }};
  return apply_rules(std::move(word), kRules);
}

std::string step5a(std::string word) {
  if (word.ends_with('e')) {
    std::string_view stem(word.data(), word.size() - 1);
    int m = measure(stem);
    if (m > 1 || (m == 1 && !ends_cvc(stem))) return std::string(stem);
  }
  return word;
}

std::string step5b(std::string word) {
  if (word.ends_with("ll") &&
      measure(std::string_view(word.data(), word.size() - 1)) > 1)
    word.pop_back();
  return word;
}

}  // namespace

std::string porter_stem(std::string_view word) {
  std::string w(word);
  w = step1a(std::move(w));
  w = step1b(std::move(w));
  w = step1c(std::move(w));
  w = step2(std::move(w));
  w = step3(std::move(w));
  w = step4(std::move(w));
  w = step5a(std::move(w));
  w = step5b(std::move(w));
  return w;
}

}  // namespace coordrank
