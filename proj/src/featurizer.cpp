#include "depembed/featurizer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

#include "depembed/util.hpp"

namespace depembed {

BowVocab fit_bow(const std::vector<std::vector<std::string>>& train_tweets, std::size_t size) {
  std::unordered_map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;
  for (const auto& tweet : train_tweets)
    for (const auto& tok : tweet) {
      ++counts[tok];
      ++total;
    }
  if (train_tweets.empty() || total == 0) throw std::invalid_argument("empty training set for BOW");

  std::vector<std::pair<std::string, std::uint64_t>> terms(counts.begin(), counts.end());
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (terms.size() > size) terms.resize(size);

  BowVocab vocab;
  vocab.terms.reserve(terms.size());
  vocab.frequencies.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    vocab.terms.push_back(terms[i].first);
    vocab.frequencies.push_back(terms[i].second);
    vocab.index.emplace(terms[i].first, i);
  }
  return vocab;
}

Eigen::VectorXd bow_vector(const std::vector<std::string>& tokens, const BowVocab& vocab) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vocab.size()));
  for (const auto& tok : tokens) {
    auto it = vocab.index.find(tok);
    if (it != vocab.index.end()) v(static_cast<Eigen::Index>(it->second)) += 1.0;
  }
  return v;
}

CategoryLexicon CategoryLexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open category lexicon: " + path);

  CategoryLexicon lex;
  std::map<long, std::size_t> id_to_index;
  std::vector<std::pair<long, std::string>> categories;

  std::string line;
  std::size_t line_no = 0;
  int percent_seen = 0;
  std::vector<std::pair<std::string, std::vector<long>>> patterns;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t == "%") {
      ++percent_seen;
      continue;
    }
    auto fields = split_on(t, '\t');
    if (percent_seen == 1) {
      if (fields.size() != 2)
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected \"id<TAB>name\"");
      long id = 0;
      auto r = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), id);
      if (r.ec != std::errc() || r.ptr != fields[0].data() + fields[0].size())
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad category id");
      categories.emplace_back(id, trim(fields[1]));
    } else if (percent_seen >= 2) {
      if (fields.size() < 2)
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": expected \"pattern<TAB>id[,id...]\"");
      std::vector<long> ids;
      for (std::size_t f = 1; f < fields.size(); ++f)
        for (const auto& part : split_on(fields[f], ',')) {
          std::string p = trim(part);
          if (p.empty()) continue;
          long id = 0;
          auto r = std::from_chars(p.data(), p.data() + p.size(), id);
          if (r.ec != std::errc() || r.ptr != p.data() + p.size())
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad category id '" + p + "'");
          ids.push_back(id);
        }
      if (ids.empty())
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": pattern without categories");
      patterns.emplace_back(to_lower_ascii(trim(fields[0])), std::move(ids));
    } else {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected '%' header before content");
    }
  }
  if (categories.empty()) throw std::runtime_error(path + ": no categories defined");

  std::sort(categories.begin(), categories.end());
  for (const auto& [id, name] : categories) {
    if (id_to_index.count(id)) throw std::runtime_error(path + ": duplicate category id");
    id_to_index[id] = lex.names_.size();
    lex.names_.push_back(name);
  }

  for (auto& [pattern, ids] : patterns) {
    if (pattern.empty()) throw std::runtime_error(path + ": empty pattern");
    std::vector<std::size_t> dense;
    for (long id : ids) {
      auto it = id_to_index.find(id);
      if (it == id_to_index.end())
        throw std::runtime_error(path + ": pattern '" + pattern + "' references unknown category " +
                                 std::to_string(id));
      dense.push_back(it->second);
    }
    std::sort(dense.begin(), dense.end());
    dense.erase(std::unique(dense.begin(), dense.end()), dense.end());
    if (pattern.back() == '*') {
      std::string prefix = pattern.substr(0, pattern.size() - 1);
      if (prefix.empty()) throw std::runtime_error(path + ": bare '*' pattern");
      auto& v = lex.prefix_[prefix];
      v.insert(v.end(), dense.begin(), dense.end());
      lex.max_prefix_len_ = std::max(lex.max_prefix_len_, prefix.size());
    } else {
      auto& v = lex.exact_[pattern];
      v.insert(v.end(), dense.begin(), dense.end());
    }
    ++lex.pattern_count_;
  }
  return lex;
}

std::vector<std::size_t> CategoryLexicon::match(const std::string& token) const {
  std::set<std::size_t> hits;
  auto it = exact_.find(token);
  if (it != exact_.end()) hits.insert(it->second.begin(), it->second.end());
  std::size_t max_len = std::min(token.size(), max_prefix_len_);
  for (std::size_t len = 1; len <= max_len; ++len) {
    auto pit = prefix_.find(token.substr(0, len));
    if (pit != prefix_.end()) hits.insert(pit->second.begin(), pit->second.end());
  }
  return {hits.begin(), hits.end()};
}

Eigen::VectorXd category_percentages(const std::vector<std::string>& tokens,
                                     const CategoryLexicon& lex) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lex.category_count()));
  if (tokens.empty()) return v;
  for (const auto& tok : tokens)
    for (std::size_t c : lex.match(tok)) v(static_cast<Eigen::Index>(c)) += 1.0;
  v *= 100.0 / static_cast<double>(tokens.size());
  return v;
}

Eigen::VectorXd dataset_category_profile(const std::vector<std::vector<std::string>>& tweets,
                                         const CategoryLexicon& lex) {
  if (tweets.empty()) throw std::invalid_argument("empty dataset subset");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lex.category_count()));
  for (const auto& tweet : tweets) sum += category_percentages(tweet, lex);
  return sum / static_cast<double>(tweets.size());
}

const std::array<std::string, EmotionLexicon::kEmotionCount>& EmotionLexicon::emotion_names() {
  static const std::array<std::string, kEmotionCount> names = {
      "anger", "anticipation", "disgust", "fear", "joy", "sadness", "surprise", "trust"};
  return names;
}

EmotionLexicon EmotionLexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open emotion lexicon: " + path);
  EmotionLexicon lex;
  const auto& names = emotion_names();

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_on(line, '\t');
    if (fields.size() != 3)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected \"word<TAB>emotion<TAB>score\"");
    std::string word = to_lower_ascii(trim(fields[0]));
    std::string emotion = to_lower_ascii(trim(fields[1]));
    auto eit = std::find(names.begin(), names.end(), emotion);
    if (eit == names.end())
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": unknown emotion '" + emotion + "'");
    double score = 0.0;
    std::string s = trim(fields[2]);
    try {
      score = std::stod(s);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad score '" + s + "'");
    }
    if (!(score >= 0.0) || !std::isfinite(score))
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": scores must be >= 0");
    auto [it, inserted] = lex.scores.try_emplace(word);
    if (inserted) it->second.fill(0.0);
    it->second[static_cast<std::size_t>(eit - names.begin())] = score;
  }
  return lex;
}

Eigen::VectorXd emotion_scores(const std::vector<std::string>& tokens, const EmotionLexicon& lex) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(EmotionLexicon::kEmotionCount);
  for (const auto& tok : tokens) {
    auto it = lex.scores.find(tok);
    if (it == lex.scores.end()) continue;
    for (std::size_t e = 0; e < EmotionLexicon::kEmotionCount; ++e)
      v(static_cast<Eigen::Index>(e)) += it->second[e];
  }
  return v;
}

Eigen::VectorXd avg_embedding(const std::vector<std::string>& tokens, const Embedding& emb,
                              bool* all_oov) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(emb.dim()));
  std::size_t hits = 0;
  for (const auto& tok : tokens) {
    if (auto row = emb.vector(tok)) {
      for (std::size_t d = 0; d < row->size(); ++d) sum(static_cast<Eigen::Index>(d)) += (*row)[d];
      ++hits;
    }
  }
  if (all_oov != nullptr) *all_oov = hits == 0;
  if (hits == 0) return sum;  // documented degenerate case: zero vector
  return sum / static_cast<double>(hits);
}

Eigen::VectorXd pad_concat(const std::vector<std::string>& tokens, const Embedding& emb,
                           std::size_t max_len) {
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
  const std::size_t d = emb.dim();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(max_len * d));
  const std::size_t n = std::min(tokens.size(), max_len);
  for (std::size_t i = 0; i < n; ++i) {
    if (auto row = emb.vector(tokens[i])) {
      for (std::size_t k = 0; k < d; ++k)
        v(static_cast<Eigen::Index>(i * d + k)) = (*row)[k];
    }
  }
  return v;
}

MinMaxScaler fit_minmax(const Eigen::MatrixXd& train) {
  if (train.rows() == 0 || train.cols() == 0) throw std::invalid_argument("empty training matrix");
  MinMaxScaler s;
  s.col_min = train.colwise().minCoeff();
  s.col_max = train.colwise().maxCoeff();
  return s;
}

Eigen::MatrixXd apply_minmax(const MinMaxScaler& scaler, const Eigen::MatrixXd& matrix) {
  if (matrix.cols() != scaler.col_min.size())
    throw std::invalid_argument("column count does not match fitted scaler");
  Eigen::MatrixXd out(matrix.rows(), matrix.cols());
  for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
    double lo = scaler.col_min(c), hi = scaler.col_max(c);
    if (hi > lo) {
      out.col(c) = (matrix.col(c).array() - lo) / (hi - lo);
    } else {
      out.col(c).setZero();  // constant training column
    }
  }
  return out;
}

}  // namespace depembed
