#include <string>

#include "depembed/text_pipeline.hpp"

// Porter, M.F. 1980. "An algorithm for suffix stripping." Program 14(3).
// Follows the reference implementation's structure: within a step the first
// (longest) matching suffix is selected; if its measure condition fails the
// step makes no change.

namespace depembed {
namespace {

bool is_consonant(const std::string& w, int i) {
  char c = w[static_cast<std::size_t>(i)];
  if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') return false;
  if (c == 'y') return i == 0 ? true : !is_consonant(w, i - 1);
  return true;
}

// Number of VC sequences in w[0..n).
int measure(const std::string& w, int n) {
  int m = 0;
  int i = 0;
  while (i < n && is_consonant(w, i)) ++i;
  while (i < n) {
    while (i < n && !is_consonant(w, i)) ++i;
    if (i >= n) break;
    ++m;
    while (i < n && is_consonant(w, i)) ++i;
  }
  return m;
}

bool contains_vowel(const std::string& w, int n) {
  for (int i = 0; i < n; ++i)
    if (!is_consonant(w, i)) return true;
  return false;
}

bool ends_double_consonant(const std::string& w) {
  int n = static_cast<int>(w.size());
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: stem ends consonant-vowel-consonant where the final consonant is not
// w, x or y. `n` is the stem length under consideration.
bool ends_cvc(const std::string& w, int n) {
  if (n < 3) return false;
  if (!is_consonant(w, n - 3) || is_consonant(w, n - 2) || !is_consonant(w, n - 1)) return false;
  char c = w[static_cast<std::size_t>(n - 1)];
  return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(const std::string& w, const char* suf) {
  std::size_t sl = std::char_traits<char>::length(suf);
  return w.size() >= sl && w.compare(w.size() - sl, sl, suf) == 0;
}

struct Rule {
  const char* suffix;
  const char* replacement;
};

// Applies the first rule whose suffix matches; replacement happens only when
// measure(stem) > min_measure. Returns true once a suffix matched (whether or
// not the condition held), ending the step.
bool apply_rules(std::string& w, const Rule* rules, int count, int min_measure) {
  for (int r = 0; r < count; ++r) {
    std::size_t sl = std::char_traits<char>::length(rules[r].suffix);
    if (w.size() < sl || w.compare(w.size() - sl, sl, rules[r].suffix) != 0) continue;
    int stem_len = static_cast<int>(w.size() - sl);
    if (measure(w, stem_len) > min_measure) {
      w.resize(static_cast<std::size_t>(stem_len));
      w += rules[r].replacement;
    }
    return true;
  }
  return false;
}

void step1a(std::string& w) {
  if (ends_with(w, "sses")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ies")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ss")) {
    // unchanged
  } else if (ends_with(w, "s")) {
    w.resize(w.size() - 1);
  }
}

void step1b(std::string& w) {
  if (ends_with(w, "eed")) {
    if (measure(w, static_cast<int>(w.size() - 3)) > 0) w.resize(w.size() - 1);
    return;
  }
  bool stripped = false;
  if (ends_with(w, "ed") && contains_vowel(w, static_cast<int>(w.size() - 2))) {
    w.resize(w.size() - 2);
    stripped = true;
  } else if (ends_with(w, "ing") && contains_vowel(w, static_cast<int>(w.size() - 3))) {
    w.resize(w.size() - 3);
    stripped = true;
  }
  if (!stripped) return;

  if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
    w += 'e';
  } else if (ends_double_consonant(w)) {
    char c = w.back();
    if (c != 'l' && c != 's' && c != 'z') w.resize(w.size() - 1);
  } else if (measure(w, static_cast<int>(w.size())) == 1 && ends_cvc(w, static_cast<int>(w.size()))) {
    w += 'e';
  }
}

void step1c(std::string& w) {
  if (ends_with(w, "y") && contains_vowel(w, static_cast<int>(w.size() - 1))) w.back() = 'i';
}

const Rule kStep2[] = {
    {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},
    {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},
    {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
    {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
    {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
};

const Rule kStep3[] = {
    {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
    {"ical", "ic"},  {"ful", ""},   {"ness", ""},
};

void step4(std::string& w) {
  // "ion" is valid only after s or t; handle it at its slot in the table
  // order (between "ent" and "ou").
  static const Rule pre_ion[] = {{"al", ""},   {"ance", ""},  {"ence", ""}, {"er", ""},
                                 {"ic", ""},   {"able", ""},  {"ible", ""}, {"ant", ""},
                                 {"ement", ""}, {"ment", ""}, {"ent", ""}};
  if (apply_rules(w, pre_ion, static_cast<int>(std::size(pre_ion)), 1)) return;
  if (ends_with(w, "ion")) {
    int stem_len = static_cast<int>(w.size() - 3);
    if (stem_len >= 1) {
      char c = w[static_cast<std::size_t>(stem_len - 1)];
      if ((c == 's' || c == 't') && measure(w, stem_len) > 1) w.resize(static_cast<std::size_t>(stem_len));
    }
    return;
  }
  static const Rule post_ion[] = {{"ou", ""},  {"ism", ""}, {"ate", ""}, {"iti", ""},
                                  {"ous", ""}, {"ive", ""}, {"ize", ""}};
  apply_rules(w, post_ion, static_cast<int>(std::size(post_ion)), 1);
}

void step5a(std::string& w) {
  if (!ends_with(w, "e")) return;
  int stem_len = static_cast<int>(w.size() - 1);
  int m = measure(w, stem_len);
  if (m > 1 || (m == 1 && !ends_cvc(w, stem_len))) w.resize(static_cast<std::size_t>(stem_len));
}

void step5b(std::string& w) {
  if (w.back() == 'l' && ends_double_consonant(w) && measure(w, static_cast<int>(w.size())) > 1)
    w.resize(w.size() - 1);
}

}  // namespace

std::string porter_stem(const std::string& word) {
  if (word.size() <= 2) return word;
  for (char c : word)
    if (c < 'a' || c > 'z') return word;  // stemming applies to plain lowercase words only

  std::string w = word;
  step1a(w);
  step1b(w);
  step1c(w);
  apply_rules(w, kStep2, static_cast<int>(std::size(kStep2)), 0);
  apply_rules(w, kStep3, static_cast<int>(std::size(kStep3)), 0);
  step4(w);
  step5a(w);
  step5b(w);
  return w;
}

}  // namespace depembed
