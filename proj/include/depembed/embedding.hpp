#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace depembed {

// A vocabulary plus a dense |V| x d row-major float matrix. Immutable in
// spirit once built: construction is single-writer, reads are safe to share.
class Embedding {
 public:
  Embedding() = default;
  explicit Embedding(std::size_t dim) : dim_(dim) {}

  std::size_t size() const { return words_.size(); }
  std::size_t dim() const { return dim_; }
  bool empty() const { return words_.empty(); }

  const std::vector<std::string>& words() const { return words_; }
  const std::vector<float>& data() const { return data_; }

  // Appends a word with its vector. Throws on dimension mismatch, duplicate
  // word, or non-finite components.
  void add(const std::string& word, std::span<const float> vec);

  bool contains(const std::string& word) const { return index_.count(word) != 0; }
  std::optional<std::size_t> index_of(const std::string& word) const;
  const std::string& word_at(std::size_t i) const { return words_[i]; }

  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<float> mutable_row(std::size_t i) {
    return {data_.data() + i * dim_, dim_};
  }

  // Row for `word`, or nullopt when out of vocabulary. Case-sensitive.
  std::optional<std::span<const float>> vector(const std::string& word) const;

  void reserve(std::size_t n) {
    words_.reserve(n);
    data_.reserve(n * dim_);
    index_.reserve(n);
  }

  bool operator==(const Embedding& other) const {
    return dim_ == other.dim_ && words_ == other.words_ && data_ == other.data_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<float> data_;
};

// word2vec text interchange: header "N D", then N lines "word f1 ... fD".
// Duplicate words keep the first occurrence and emit a warning on stderr.
// Malformed headers or rows raise std::runtime_error with the line number.
Embedding load_word2vec_text(const std::string& path);

// Floats are written with the shortest decimal form that reparses to the
// identical value, so save -> load roundtrips bit-exactly.
void save_word2vec_text(const Embedding& emb, const std::string& path);

// Binary sidecar: little-endian, length-prefixed words + raw float32 rows.
// Faster than text for multi-million-word embeddings; text stays the
// interchange format.
Embedding load_embedding_binary(const std::string& path);
void save_embedding_binary(const Embedding& emb, const std::string& path);

// Loads either format, keying on the binary magic.
Embedding load_embedding_auto(const std::string& path);

// Lexicographically sorted words present in both vocabularies.
std::vector<std::string> common_vocab(const Embedding& a, const Embedding& b);

enum class Metric { kCosine, kEuclidean };

struct Neighbor {
  std::string word;
  double score;  // cosine similarity (higher = closer) or euclidean distance (lower = closer)
};

// Exact brute-force kNN. The query word itself is excluded; ties break
// lexicographically. k greater than |V|-1 returns all other words.
std::vector<Neighbor> nearest_neighbors(const Embedding& emb, const std::string& query,
                                        std::size_t k, Metric metric);

// Vector-query form; no word is excluded.
std::vector<Neighbor> nearest_neighbors(const Embedding& emb, std::span<const float> query,
                                        std::size_t k, Metric metric);

}  // namespace depembed
