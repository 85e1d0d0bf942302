#include "depembed/text_pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "depembed/util.hpp"

namespace depembed {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Word characters: ASCII alphanumerics, underscore, and any non-ASCII byte
// (multibyte UTF-8 sequences stay inside words).
bool is_word_char(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || u >= 0x80;
}

// Fallback inventory, used until set_emoticon_inventory() is called. The
// shipped data/emoticons.txt is a superset of this.
const char* kBuiltinEmoticons[] = {
    ":-)", ":)",  ":d",  ":-d", "=)",  "=]",  ":]",  ":-]", ":-(", ":(",  ":c",
    ":-c", ":[",  ":-[", ":'(", ":'-(", ":')", ";-)", ";)",  ";d",  ":-p", ":p",
    "=p",  ":-/", ":/",  ":\\", "=/",  "=\\", ":-o", ":o",  ":-*", ":*",  ":-|",
    ":|",  "<3",  "</3", "xd",  "x-d", "-_-", "^_^", ">.<", "o.o", "t_t"};

struct EmoticonIndex {
  // Grouped by first character; candidates per bucket sorted longest-first.
  std::unordered_map<char, std::vector<std::string>> by_first;

  void build(const std::vector<std::string>& entries) {
    by_first.clear();
    for (const auto& e : entries) {
      if (e.empty()) continue;
      by_first[e[0]].push_back(e);
    }
    for (auto& [c, v] : by_first) {
      std::sort(v.begin(), v.end(), [](const std::string& a, const std::string& b) {
        return a.size() != b.size() ? a.size() > b.size() : a < b;
      });
    }
  }

  // Longest emoticon starting at s[pos], or 0 if none.
  std::size_t match(const std::string& s, std::size_t pos) const {
    auto it = by_first.find(s[pos]);
    if (it == by_first.end()) return 0;
    for (const auto& e : it->second) {
      if (s.compare(pos, e.size(), e) == 0) return e.size();
    }
    return 0;
  }
};

EmoticonIndex& emoticon_index() {
  static EmoticonIndex idx = [] {
    EmoticonIndex i;
    std::vector<std::string> v(std::begin(kBuiltinEmoticons), std::end(kBuiltinEmoticons));
    i.build(v);
    return i;
  }();
  return idx;
}

bool starts_url(const std::string& s, std::size_t pos) {
  return s.compare(pos, 7, "http://") == 0 || s.compare(pos, 8, "https://") == 0 ||
         s.compare(pos, 4, "www.") == 0;
}

// Matches a word with internal apostrophes/hyphens: don't, i'm, self-harm.
std::size_t match_word(const std::string& s, std::size_t pos) {
  std::size_t i = pos;
  while (i < s.size() && is_word_char(s[i])) ++i;
  if (i == pos) return 0;
  while (i < s.size() && (s[i] == '\'' || s[i] == '-')) {
    std::size_t j = i + 1;
    std::size_t k = j;
    while (k < s.size() && is_word_char(s[k])) ++k;
    if (k == j) break;
    i = k;
  }
  return i - pos;
}

}  // namespace

void set_emoticon_inventory(const std::vector<std::string>& emoticons) {
  emoticon_index().build(emoticons);
}

std::vector<std::string> load_wordlist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open word list: " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

const std::set<std::string>& default_retained_pronouns() {
  static const std::set<std::string> p = {"i", "me", "my", "mine", "myself"};
  return p;
}

StopwordPolicy StopwordPolicy::from_files(const std::string& stopword_path) {
  StopwordPolicy policy;
  for (auto& w : load_wordlist(stopword_path)) policy.stopword_set.insert(to_lower_ascii(w));
  policy.retained_pronouns = default_retained_pronouns();
  return policy;
}

std::vector<std::string> tokenize_tweet(const std::string& text) {
  const std::string s = to_lower_ascii(text);
  const EmoticonIndex& emo = emoticon_index();
  std::vector<std::string> tokens;

  std::size_t i = 0;
  while (i < s.size()) {
    if (is_space(s[i])) {
      ++i;
      continue;
    }
    if (starts_url(s, i)) {
      std::size_t j = i;
      while (j < s.size() && !is_space(s[j])) ++j;
      tokens.push_back(s.substr(i, j - i));
      i = j;
      continue;
    }
    if (std::size_t n = emo.match(s, i); n > 0) {
      tokens.push_back(s.substr(i, n));
      i += n;
      continue;
    }
    if ((s[i] == '#' || s[i] == '@')) {
      if (std::size_t n = match_word(s, i + 1); n > 0) {
        tokens.push_back(s.substr(i, n + 1));
        i += n + 1;
        continue;
      }
    }
    if (std::size_t n = match_word(s, i); n > 0) {
      tokens.push_back(s.substr(i, n));
      i += n;
      continue;
    }
    // Punctuation: a maximal run of the same character is one token, so
    // "..." and "!!" hold together.
    std::size_t j = i + 1;
    while (j < s.size() && s[j] == s[i]) ++j;
    tokens.push_back(s.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::vector<std::string> filter_stopwords(const std::vector<std::string>& tokens,
                                          const StopwordPolicy& policy) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (policy.stopword_set.count(t) && !policy.retained_pronouns.count(t)) continue;
    out.push_back(t);
  }
  return out;
}

std::vector<std::string> split_sentences(const std::string& post_text) {
  std::vector<std::string> sentences;
  std::string current;
  auto flush = [&] {
    std::string t = trim(current);
    if (!t.empty()) sentences.push_back(std::move(t));
    current.clear();
  };
  for (std::size_t i = 0; i < post_text.size(); ++i) {
    char c = post_text[i];
    if (c == '.' || c == '?' || c == '!') {
      flush();
      continue;
    }
    // U+2026 HORIZONTAL ELLIPSIS = 0xE2 0x80 0xA6
    if (static_cast<unsigned char>(c) == 0xE2 && i + 2 < post_text.size() &&
        static_cast<unsigned char>(post_text[i + 1]) == 0x80 &&
        static_cast<unsigned char>(post_text[i + 2]) == 0xA6) {
      flush();
      i += 2;
      continue;
    }
    current.push_back(c);
  }
  flush();
  return sentences;
}

}  // namespace depembed
