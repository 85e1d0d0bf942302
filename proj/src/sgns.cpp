#include "depembed/sgns.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace depembed {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Uniform double in [0,1) from the word2vec LCG.
double rng_uniform(std::uint64_t& state) {
  return static_cast<double>((sgns_rng_next(state) >> 16) & 0xFFFFFFFFULL) / 4294967296.0;
}

struct WorkerResult {
  double loss_sum = 0.0;
  std::uint64_t pair_count = 0;
};

}  // namespace

CorpusVocab build_vocab(const std::vector<std::vector<std::string>>& sentences,
                        std::size_t mincount) {
  std::unordered_map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;
  for (const auto& sent : sentences)
    for (const auto& tok : sent) {
      ++counts[tok];
      ++total;
    }
  if (total == 0) throw std::invalid_argument("empty corpus");

  CorpusVocab vocab;
  for (const auto& [w, c] : counts)
    if (c >= mincount) {
      vocab.words.push_back(w);
      vocab.counts.push_back(c);
    }
  if (vocab.words.empty()) throw std::invalid_argument("no words survive mincount filter");

  std::vector<std::size_t> order(vocab.words.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (vocab.counts[a] != vocab.counts[b]) return vocab.counts[a] > vocab.counts[b];
    return vocab.words[a] < vocab.words[b];
  });
  std::vector<std::string> words(order.size());
  std::vector<std::uint64_t> cs(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    words[i] = std::move(vocab.words[order[i]]);
    cs[i] = vocab.counts[order[i]];
  }
  vocab.words = std::move(words);
  vocab.counts = std::move(cs);
  for (std::size_t i = 0; i < vocab.words.size(); ++i) vocab.index.emplace(vocab.words[i], i);

  vocab.total_tokens = 0;
  for (auto c : vocab.counts) vocab.total_tokens += c;

  double norm = 0.0;
  vocab.probabilities.resize(vocab.counts.size());
  for (std::size_t i = 0; i < vocab.counts.size(); ++i) {
    vocab.probabilities[i] = std::pow(static_cast<double>(vocab.counts[i]), 0.75);
    norm += vocab.probabilities[i];
  }
  vocab.cumulative.resize(vocab.probabilities.size());
  double running = 0.0;
  for (std::size_t i = 0; i < vocab.probabilities.size(); ++i) {
    vocab.probabilities[i] /= norm;
    running += vocab.probabilities[i];
    vocab.cumulative[i] = running;
  }
  vocab.cumulative.back() = 1.0;
  return vocab;
}

std::size_t negative_sample(const CorpusVocab& vocab, std::uint64_t& rng_state) {
  if (vocab.words.empty()) throw std::invalid_argument("empty vocabulary");
  double u = rng_uniform(rng_state);
  auto it = std::upper_bound(vocab.cumulative.begin(), vocab.cumulative.end(), u);
  if (it == vocab.cumulative.end()) --it;
  return static_cast<std::size_t>(it - vocab.cumulative.begin());
}

SgnsModel train_sgns_model(const std::vector<std::vector<std::string>>& sentences,
                           const SgnsConfig& cfg) {
  if (cfg.dim < 1 || cfg.window < 1 || cfg.negatives < 1 || cfg.mincount < 1)
    throw std::invalid_argument("invalid SGNS configuration");

  CorpusVocab vocab = build_vocab(sentences, cfg.mincount);
  if (vocab.size() < 2) throw std::invalid_argument("need at least 2 retained distinct words");

  const std::size_t V = vocab.size();
  const std::size_t D = cfg.dim;

  // Input vectors U(-0.5/d, 0.5/d), output vectors zero.
  std::vector<float> syn0(V * D);
  std::vector<float> syn1(V * D, 0.0f);
  {
    std::uint64_t state = cfg.seed;
    for (auto& v : syn0)
      v = static_cast<float>((rng_uniform(state) - 0.5) / static_cast<double>(D));
  }

  // Corpus as retained-word ids.
  std::vector<std::vector<std::size_t>> ids;
  ids.reserve(sentences.size());
  for (const auto& sent : sentences) {
    std::vector<std::size_t> s;
    s.reserve(sent.size());
    for (const auto& tok : sent)
      if (auto idx = vocab.index_of(tok)) s.push_back(*idx);
    if (!s.empty()) ids.push_back(std::move(s));
  }

  const double alpha0 = cfg.learning_rate;
  const double alpha_min = alpha0 / 10000.0;
  const std::uint64_t total_planned =
      std::max<std::uint64_t>(1, static_cast<std::uint64_t>(cfg.epochs) * vocab.total_tokens);
  std::atomic<std::uint64_t> processed{0};

  std::vector<double> epoch_losses;

  const std::size_t workers = std::max<std::size_t>(1, cfg.workers);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<WorkerResult> results(workers);

    auto run_shard = [&](std::size_t wid) {
      std::uint64_t rng = cfg.seed + 0x9e3779b97f4a7c15ULL * (wid + 1) + epoch * 0x100000001b3ULL;
      std::vector<double> grad_center(D);
      WorkerResult& res = results[wid];
      std::uint64_t local_processed = 0;

      const std::size_t lo = ids.size() * wid / workers;
      const std::size_t hi = ids.size() * (wid + 1) / workers;
      for (std::size_t si = lo; si < hi; ++si) {
        const auto& sent = ids[si];
        for (std::size_t pos = 0; pos < sent.size(); ++pos) {
          ++local_processed;
          if ((local_processed & 0x3FF) == 0)
            processed.fetch_add(0x400, std::memory_order_relaxed);

          const std::size_t center = sent[pos];
          if (cfg.subsample > 0.0) {
            double f = static_cast<double>(vocab.counts[center]) /
                       static_cast<double>(vocab.total_tokens);
            double keep = (std::sqrt(f / cfg.subsample) + 1.0) * cfg.subsample / f;
            if (keep < 1.0 && rng_uniform(rng) > keep) continue;
          }

          double done = static_cast<double>(processed.load(std::memory_order_relaxed)) /
                        static_cast<double>(total_planned);
          double alpha = std::max(alpha_min, alpha0 * (1.0 - done));

          const std::size_t shrink = sgns_rng_next(rng) % cfg.window;  // window size window-shrink
          const std::size_t lo_off = pos > (cfg.window - shrink) ? pos - (cfg.window - shrink) : 0;
          const std::size_t hi_off = std::min(sent.size() - 1, pos + (cfg.window - shrink));

          float* v = syn0.data() + center * D;
          for (std::size_t cpos = lo_off; cpos <= hi_off; ++cpos) {
            if (cpos == pos) continue;
            const std::size_t context = sent[cpos];

            std::fill(grad_center.begin(), grad_center.end(), 0.0);
            double pair_loss = 0.0;
            for (std::size_t s = 0; s <= cfg.negatives; ++s) {
              std::size_t target;
              double label;
              if (s == 0) {
                target = context;
                label = 1.0;
              } else {
                target = negative_sample(vocab, rng);
                if (target == context) continue;
                label = 0.0;
              }
              float* u = syn1.data() + target * D;
              double f = 0.0;
              for (std::size_t d = 0; d < D; ++d) f += static_cast<double>(v[d]) * u[d];
              double sig = sigmoid(f);
              pair_loss += label > 0.5 ? -std::log(std::max(sig, 1e-12))
                                       : -std::log(std::max(1.0 - sig, 1e-12));
              double g = (label - sig) * alpha;
              for (std::size_t d = 0; d < D; ++d) {
                grad_center[d] += g * u[d];
                u[d] += static_cast<float>(g * v[d]);
              }
            }
            for (std::size_t d = 0; d < D; ++d) v[d] += static_cast<float>(grad_center[d]);
            res.loss_sum += pair_loss;
            res.pair_count += 1;
          }
        }
      }
      processed.fetch_add(local_processed & 0x3FF, std::memory_order_relaxed);
    };

    if (workers == 1) {
      run_shard(0);
    } else {
      std::vector<std::thread> threads;
      for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run_shard, w);
      for (auto& t : threads) t.join();
    }

    double loss = 0.0;
    std::uint64_t pairs = 0;
    for (const auto& r : results) {
      loss += r.loss_sum;
      pairs += r.pair_count;
    }
    epoch_losses.push_back(pairs > 0 ? loss / static_cast<double>(pairs) : 0.0);
  }

  SgnsModel model;
  model.embedding = Embedding(D);
  model.embedding.reserve(V);
  for (std::size_t i = 0; i < V; ++i)
    model.embedding.add(vocab.words[i], {syn0.data() + i * D, D});
  model.context_vectors = std::move(syn1);
  model.epoch_losses = std::move(epoch_losses);
  return model;
}

Embedding train_sgns(const std::vector<std::vector<std::string>>& sentences,
                     const SgnsConfig& cfg) {
  return train_sgns_model(sentences, cfg).embedding;
}

}  // namespace depembed
