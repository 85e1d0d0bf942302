#pragma once

#include <set>
#include <string>
#include <vector>

namespace depembed {

// Tokenized form of a post. Tokens come out lowercased and whitespace-free;
// emoticons, #hashtags, @mentions and URLs are single tokens.
struct ProcessedText {
  std::string raw;
  std::vector<std::string> tokens;
};

struct StopwordPolicy {
  std::set<std::string> stopword_set;
  std::set<std::string> retained_pronouns;  // never removed even if listed as stopwords

  static StopwordPolicy from_files(const std::string& stopword_path);
};

// Default pronouns kept for the detection task: first-person forms.
const std::set<std::string>& default_retained_pronouns();

// Longest-match emoticon inventory used by tokenize_tweet. Entries must be
// lowercase (tokenization lowercases the text first). Replaces the built-in
// inventory for all subsequent calls; not thread-safe against concurrent
// tokenization.
void set_emoticon_inventory(const std::vector<std::string>& emoticons);
std::vector<std::string> load_wordlist(const std::string& path);

std::vector<std::string> tokenize_tweet(const std::string& text);

std::vector<std::string> filter_stopwords(const std::vector<std::string>& tokens,
                                          const StopwordPolicy& policy);

// Porter (1980) stem of a lowercase alphabetic word. Tokens containing
// anything but a-z pass through unchanged.
std::string porter_stem(const std::string& word);

// Splits on '?', '!', '.', and the unicode ellipsis; terminators are dropped,
// empty segments discarded, segments trimmed.
std::vector<std::string> split_sentences(const std::string& post_text);

}  // namespace depembed
