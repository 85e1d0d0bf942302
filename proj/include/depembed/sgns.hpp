#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "depembed/embedding.hpp"

namespace depembed {

struct SgnsConfig {
  std::size_t dim = 400;
  std::size_t window = 5;     // max context offset; actual window uniform in 1..window
  std::size_t mincount = 10;  // minimum token frequency
  std::size_t negatives = 5;  // k
  std::size_t epochs = 5;
  double learning_rate = 0.025;  // decays linearly to learning_rate/10000
  double subsample = 0.0;        // frequent-word subsampling threshold, 0 = off
  std::uint64_t seed = 1;
  std::size_t workers = 1;  // >1 enables lock-free (Hogwild) updates; determinism needs 1
};

// Frequency-filtered vocabulary with the unigram^0.75 sampling table.
struct CorpusVocab {
  std::vector<std::string> words;  // sorted by count desc, then word asc
  std::vector<std::uint64_t> counts;
  std::unordered_map<std::string, std::size_t> index;
  std::uint64_t total_tokens = 0;      // occurrences of retained words
  std::vector<double> probabilities;   // count^0.75, normalized
  std::vector<double> cumulative;      // running sums of probabilities

  std::size_t size() const { return words.size(); }
  std::optional<std::size_t> index_of(const std::string& w) const {
    auto it = index.find(w);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

// Counts tokens and drops words below mincount. Throws on an empty corpus.
CorpusVocab build_vocab(const std::vector<std::vector<std::string>>& sentences,
                        std::size_t mincount);

// Linear congruential generator used throughout SGNS training (word2vec's).
inline std::uint64_t sgns_rng_next(std::uint64_t& state) {
  state = state * 25214903917ULL + 11ULL;
  return state;
}

// Draws one word index from the unigram^0.75 distribution.
std::size_t negative_sample(const CorpusVocab& vocab, std::uint64_t& rng_state);

struct SgnsModel {
  Embedding embedding;                // input (target-word) vectors; the exported artifact
  std::vector<float> context_vectors; // output vectors, |V| x dim row-major; diagnostic
  std::vector<double> epoch_losses;   // mean negative SGNS objective per positive pair
};

// Skip-gram negative sampling. Objective per (center w, context c) pair:
// maximize log sigma(u_c . v_w) + sum_i log sigma(-u_{n_i} . v_w).
// Deterministic for a fixed seed with workers = 1. Throws when fewer than
// two distinct words survive the mincount filter.
SgnsModel train_sgns_model(const std::vector<std::vector<std::string>>& sentences,
                           const SgnsConfig& cfg);

Embedding train_sgns(const std::vector<std::vector<std::string>>& sentences,
                     const SgnsConfig& cfg);

}  // namespace depembed
