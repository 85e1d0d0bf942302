#pragma once

#include <Eigen/Core>
#include <array>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "depembed/embedding.hpp"

namespace depembed {

// Most frequent terms of the training split; fitted on train data only.
struct BowVocab {
  std::vector<std::string> terms;           // by frequency desc, ties lexicographic
  std::vector<std::uint64_t> frequencies;   // train-set counts, aligned with terms
  std::unordered_map<std::string, std::size_t> index;

  std::size_t size() const { return terms.size(); }
};

BowVocab fit_bow(const std::vector<std::vector<std::string>>& train_tweets,
                 std::size_t size = 400);

Eigen::VectorXd bow_vector(const std::vector<std::string>& tokens, const BowVocab& vocab);

// LIWC-style category dictionary. File format: a '%' line, then
// "id<TAB>name" category lines, a closing '%' line, then pattern lines
// "pattern<TAB>id[,id...]" (ids may also be tab-separated); a trailing '*'
// makes the pattern a prefix wildcard.
class CategoryLexicon {
 public:
  static CategoryLexicon load(const std::string& path);

  std::size_t category_count() const { return names_.size(); }
  const std::vector<std::string>& category_names() const { return names_; }

  // Dense category indices the token belongs to (exact or prefix match).
  std::vector<std::size_t> match(const std::string& token) const;

  std::size_t pattern_count() const { return pattern_count_; }

 private:
  std::vector<std::string> names_;  // ordered by ascending file id
  std::unordered_map<std::string, std::vector<std::size_t>> exact_;
  std::unordered_map<std::string, std::vector<std::size_t>> prefix_;
  std::size_t max_prefix_len_ = 0;
  std::size_t pattern_count_ = 0;
};

// Component c = 100 * (#tokens matching category c) / (#tokens).
// Empty token list yields a zero vector.
Eigen::VectorXd category_percentages(const std::vector<std::string>& tokens,
                                     const CategoryLexicon& lex);

// Per-category mean of category_percentages over a set of tweets.
Eigen::VectorXd dataset_category_profile(const std::vector<std::vector<std::string>>& tweets,
                                         const CategoryLexicon& lex);

// word -> 8 nonnegative emotion scores, TSV "word<TAB>emotion<TAB>score".
struct EmotionLexicon {
  static constexpr std::size_t kEmotionCount = 8;
  static const std::array<std::string, kEmotionCount>& emotion_names();

  std::unordered_map<std::string, std::array<double, kEmotionCount>> scores;

  static EmotionLexicon load(const std::string& path);
};

// Componentwise sum of the per-token score vectors; OOV tokens contribute 0.
Eigen::VectorXd emotion_scores(const std::vector<std::string>& tokens,
                               const EmotionLexicon& lex);

// Mean of in-vocabulary token vectors; all-OOV and empty tweets produce the
// zero vector and set *all_oov when provided.
Eigen::VectorXd avg_embedding(const std::vector<std::string>& tokens, const Embedding& emb,
                              bool* all_oov = nullptr);

// Token vectors in order, flattened to max_len*d; OOV slots and the tail are
// zero, tweets longer than max_len are truncated.
Eigen::VectorXd pad_concat(const std::vector<std::string>& tokens, const Embedding& emb,
                           std::size_t max_len);

// Per-column min-max parameters, fitted on the training matrix only.
struct MinMaxScaler {
  Eigen::VectorXd col_min;
  Eigen::VectorXd col_max;
};

MinMaxScaler fit_minmax(const Eigen::MatrixXd& train);

// Columns map through (x - min) / (max - min); constant columns map to 0.
// Values outside the training range are not clamped.
Eigen::MatrixXd apply_minmax(const MinMaxScaler& scaler, const Eigen::MatrixXd& matrix);

}  // namespace depembed
