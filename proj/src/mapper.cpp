#include "depembed/mapper.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "depembed/checkpoint.hpp"

namespace depembed {

namespace {

Eigen::MatrixXd rows_as_matrix(const Embedding& emb, const std::vector<std::string>& words) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(words.size()),
                      static_cast<Eigen::Index>(emb.dim()));
  for (std::size_t i = 0; i < words.size(); ++i) {
    auto r = *emb.vector(words[i]);
    for (std::size_t d = 0; d < r.size(); ++d)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = r[d];
  }
  return out;
}

// Hidden pre-activations for rows of X; shared by forward and backprop.
Eigen::MatrixXd hidden_pre(const MlpMapper& m, const Eigen::MatrixXd& X) {
  return (X * m.w_hidden.transpose()).rowwise() + m.b_hidden.transpose();
}

struct CentroidTargets {
  Eigen::MatrixXd near;
  Eigen::MatrixXd far;
};

// k nearest (or most distant) row indices for each query row, computed in
// blocks with ||q-x||^2 = ||q||^2 + ||x||^2 - 2 q.x. `exclude` gives the
// matrix row to skip per query (the word itself).
std::vector<std::vector<Eigen::Index>> knn_blocked(const Eigen::MatrixXd& data,
                                                   const std::vector<std::string>& words,
                                                   const Eigen::MatrixXd& queries,
                                                   const std::vector<Eigen::Index>& exclude,
                                                   std::size_t k, bool farthest) {
  const Eigen::Index n = data.rows();
  const Eigen::Index q = queries.rows();
  Eigen::VectorXd data_sq = data.rowwise().squaredNorm();
  std::vector<std::vector<Eigen::Index>> result(static_cast<std::size_t>(q));

  const Eigen::Index block = 256;
  for (Eigen::Index q0 = 0; q0 < q; q0 += block) {
    const Eigen::Index qn = std::min(block, q - q0);
    Eigen::MatrixXd cross = queries.middleRows(q0, qn) * data.transpose();  // qn x n
    Eigen::VectorXd query_sq = queries.middleRows(q0, qn).rowwise().squaredNorm();
    for (Eigen::Index i = 0; i < qn; ++i) {
      std::vector<std::pair<double, Eigen::Index>> scored;
      scored.reserve(static_cast<std::size_t>(n));
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == exclude[static_cast<std::size_t>(q0 + i)]) continue;
        scored.emplace_back(query_sq(i) + data_sq(j) - 2.0 * cross(i, j), j);
      }
      auto better = [&](const auto& a, const auto& b) {
        if (a.first != b.first) return farthest ? a.first > b.first : a.first < b.first;
        return words[static_cast<std::size_t>(a.second)] < words[static_cast<std::size_t>(b.second)];
      };
      std::size_t take = std::min(k, scored.size());
      std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                        scored.end(), better);
      auto& out = result[static_cast<std::size_t>(q0 + i)];
      out.reserve(take);
      for (std::size_t t = 0; t < take; ++t) out.push_back(scored[t].second);
    }
  }
  return result;
}

CentroidTargets build_centroid_targets(const Embedding& target_emb,
                                       const std::vector<std::string>& vocab,
                                       const CentroidConfig& cfg, bool want_far) {
  if (cfg.k_near < 1) throw std::invalid_argument("k_near must be >= 1");
  if (cfg.k_near > target_emb.size() - 1 || (want_far && cfg.k_far > target_emb.size() - 1))
    throw std::invalid_argument("neighbor count exceeds vocabulary size - 1");

  Eigen::MatrixXd data = rows_as_matrix(target_emb, target_emb.words());
  Eigen::MatrixXd queries = rows_as_matrix(target_emb, vocab);
  std::vector<Eigen::Index> exclude(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i)
    exclude[i] = static_cast<Eigen::Index>(*target_emb.index_of(vocab[i]));

  CentroidTargets targets;
  targets.near.resize(queries.rows(), data.cols());
  auto near_idx = knn_blocked(data, target_emb.words(), queries, exclude, cfg.k_near, false);
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    Eigen::VectorXd sum = queries.row(static_cast<Eigen::Index>(i));  // centroid includes w itself
    for (auto j : near_idx[i]) sum += data.row(j);
    targets.near.row(static_cast<Eigen::Index>(i)) =
        sum / static_cast<double>(near_idx[i].size() + 1);
  }

  if (want_far) {
    if (cfg.k_far < 1) throw std::invalid_argument("k_far must be >= 1");
    targets.far.resize(queries.rows(), data.cols());
    auto far_idx = knn_blocked(data, target_emb.words(), queries, exclude, cfg.k_far, true);
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(data.cols());
      for (auto j : far_idx[i]) sum += data.row(j);
      targets.far.row(static_cast<Eigen::Index>(i)) = sum / static_cast<double>(far_idx[i].size());
    }
  }
  return targets;
}

void check_pair_dims(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  if (X.rows() == 0) throw std::invalid_argument("empty batch");
  if (X.rows() != Y.rows()) throw std::invalid_argument("X and Y row counts differ");
}

// Shared backprop; dOut is the gradient of the loss w.r.t. the network output.
MapperGradients backprop(const MlpMapper& m, const Eigen::MatrixXd& X,
                         const Eigen::MatrixXd& pre, const Eigen::MatrixXd& dOut) {
  Eigen::MatrixXd H = pre.cwiseMax(0.0);
  MapperGradients g;
  g.w_output = dOut.transpose() * H;
  g.b_output = dOut.colwise().sum().transpose();
  Eigen::MatrixXd dH = (dOut * m.w_output).cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
  g.w_hidden = dH.transpose() * X;
  g.b_hidden = dH.colwise().sum().transpose();
  return g;
}

struct SgdState {
  double lr = 0.0;
  double best_loss = std::numeric_limits<double>::infinity();
  std::size_t bad_epochs = 0;
  MlpMapper best;
  bool have_best = false;
};

using LossGradFn = MapperGradients (*)(const MlpMapper&, const Eigen::MatrixXd&,
                                       const Eigen::MatrixXd&, const Eigen::MatrixXd&, double,
                                       double);

MapperGradients plain_grad(const MlpMapper& m, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Yn,
                           const Eigen::MatrixXd&, double, double) {
  return gradient(m, X, Yn);
}

MapperGradients centroid_grad(const MlpMapper& m, const Eigen::MatrixXd& X,
                              const Eigen::MatrixXd& Yn, const Eigen::MatrixXd& Yf, double lambda,
                              double cap) {
  return centroid_gradient(m, X, Yn, Yf, lambda, cap);
}

MlpMapper sgd_train(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y_near,
                    const Eigen::MatrixXd& Y_far, double lambda, const MapperTrainConfig& cfg,
                    MapperTrainLog* log) {
  const Eigen::Index n = X.rows();
  const bool has_far = Y_far.rows() > 0 && lambda != 0.0;

  MlpMapper mapper = init_mapper(X.cols(), Y_near.cols(), cfg.hidden_units, cfg.seed);

  std::mt19937 rng(static_cast<std::uint32_t>(cfg.seed ^ 0x5bd1e995u));
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);

  Eigen::Index n_val = static_cast<Eigen::Index>(
      std::floor(cfg.validation_fraction * static_cast<double>(n)));
  if (n_val >= n) n_val = n - 1;
  std::vector<Eigen::Index> val_idx(perm.begin(), perm.begin() + n_val);
  std::vector<Eigen::Index> train_idx(perm.begin() + n_val, perm.end());

  auto gather = [](const Eigen::MatrixXd& M, const std::vector<Eigen::Index>& idx) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), M.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = M.row(idx[i]);
    return out;
  };
  Eigen::MatrixXd Xtr = gather(X, train_idx), Ytr = gather(Y_near, train_idx);
  Eigen::MatrixXd Ftr = has_far ? gather(Y_far, train_idx) : Eigen::MatrixXd();
  // Monitor on the held-out pairs when there are any, otherwise on train.
  Eigen::MatrixXd Xmon = n_val > 0 ? gather(X, val_idx) : Xtr;
  Eigen::MatrixXd Ymon = n_val > 0 ? gather(Y_near, val_idx) : Ytr;
  Eigen::MatrixXd Fmon = has_far ? (n_val > 0 ? gather(Y_far, val_idx) : Ftr) : Eigen::MatrixXd();

  // Centroid2 cap: bound the pushed-away term by 10x the initial near-loss.
  double cap = 0.0;
  if (has_far) cap = 10.0 * mse_loss(mapper, Xtr, Ytr);

  auto monitor_loss = [&]() {
    return has_far ? centroid_loss(mapper, Xmon, Ymon, Fmon, lambda, cap)
                   : mse_loss(mapper, Xmon, Ymon);
  };

  LossGradFn grad_fn = has_far ? centroid_grad : plain_grad;

  SgdState st;
  st.lr = cfg.learning_rate;
  if (log) {
    log->initial_loss = monitor_loss();
    log->epoch_losses.clear();
    log->far_cap = cap;
  }

  const Eigen::Index batch = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(cfg.batch_size));
  std::vector<Eigen::Index> order(train_idx.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t b0 = 0; b0 < order.size(); b0 += static_cast<std::size_t>(batch)) {
      const std::size_t bn = std::min(order.size() - b0, static_cast<std::size_t>(batch));
      Eigen::MatrixXd Xb(static_cast<Eigen::Index>(bn), Xtr.cols());
      Eigen::MatrixXd Yb(static_cast<Eigen::Index>(bn), Ytr.cols());
      Eigen::MatrixXd Fb;
      if (has_far) Fb.resize(static_cast<Eigen::Index>(bn), Ftr.cols());
      for (std::size_t i = 0; i < bn; ++i) {
        Xb.row(static_cast<Eigen::Index>(i)) = Xtr.row(order[b0 + i]);
        Yb.row(static_cast<Eigen::Index>(i)) = Ytr.row(order[b0 + i]);
        if (has_far) Fb.row(static_cast<Eigen::Index>(i)) = Ftr.row(order[b0 + i]);
      }
      MapperGradients g = grad_fn(mapper, Xb, Yb, Fb, lambda, cap);
      mapper.w_hidden -= st.lr * g.w_hidden;
      mapper.b_hidden -= st.lr * g.b_hidden;
      mapper.w_output -= st.lr * g.w_output;
      mapper.b_output -= st.lr * g.b_output;
    }

    double loss = monitor_loss();
    if (log) {
      log->epoch_losses.push_back(loss);
      log->epochs_run = epoch + 1;
    }
    if (loss < st.best_loss - 1e-12) {
      st.best_loss = loss;
      st.best = mapper;
      st.have_best = true;
      st.bad_epochs = 0;
    } else {
      ++st.bad_epochs;
      if (cfg.plateau_epochs > 0 && st.bad_epochs % cfg.plateau_epochs == 0) st.lr *= 0.5;
      if (cfg.patience > 0 && st.bad_epochs >= cfg.patience) break;
    }
  }
  return st.have_best ? st.best : mapper;
}

}  // namespace

MlpMapper init_mapper(Eigen::Index d_in, Eigen::Index d_out, Eigen::Index hidden,
                      std::uint64_t seed) {
  if (d_in < 1 || d_out < 1 || hidden < 1) throw std::invalid_argument("invalid mapper dimensions");
  MlpMapper m;
  std::mt19937 rng(static_cast<std::uint32_t>(seed));
  auto glorot = [&](Eigen::Index rows, Eigen::Index cols) {
    double s = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::uniform_real_distribution<double> dist(-s, s);
    Eigen::MatrixXd w(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = dist(rng);
    return w;
  };
  m.w_hidden = glorot(hidden, d_in);
  m.b_hidden = Eigen::VectorXd::Zero(hidden);
  m.w_output = glorot(d_out, hidden);
  m.b_output = Eigen::VectorXd::Zero(d_out);
  return m;
}

Eigen::VectorXd forward(const MlpMapper& m, const Eigen::VectorXd& x) {
  if (x.size() != m.input_dim()) throw std::invalid_argument("input dimension mismatch");
  return m.w_output * (m.w_hidden * x + m.b_hidden).cwiseMax(0.0) + m.b_output;
}

Eigen::MatrixXd forward_batch(const MlpMapper& m, const Eigen::MatrixXd& X) {
  if (X.cols() != m.input_dim()) throw std::invalid_argument("input dimension mismatch");
  Eigen::MatrixXd H = hidden_pre(m, X).cwiseMax(0.0);
  return (H * m.w_output.transpose()).rowwise() + m.b_output.transpose();
}

Eigen::VectorXd forward(const LinearMapper& m, const Eigen::VectorXd& x) {
  if (x.size() != m.input_dim()) throw std::invalid_argument("input dimension mismatch");
  return m.weight * x + m.bias;
}

Eigen::MatrixXd forward_batch(const LinearMapper& m, const Eigen::MatrixXd& X) {
  if (X.cols() != m.input_dim()) throw std::invalid_argument("input dimension mismatch");
  return (X * m.weight.transpose()).rowwise() + m.bias.transpose();
}

double mse_loss(const MlpMapper& m, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  check_pair_dims(X, Y);
  return (forward_batch(m, X) - Y).rowwise().squaredNorm().mean();
}

MapperGradients gradient(const MlpMapper& m, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  check_pair_dims(X, Y);
  Eigen::MatrixXd pre = hidden_pre(m, X);
  Eigen::MatrixXd out = (pre.cwiseMax(0.0) * m.w_output.transpose()).rowwise() + m.b_output.transpose();
  Eigen::MatrixXd dOut = 2.0 / static_cast<double>(X.rows()) * (out - Y);
  return backprop(m, X, pre, dOut);
}

double centroid_loss(const MlpMapper& m, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y_near,
                     const Eigen::MatrixXd& Y_far, double lambda, double cap) {
  check_pair_dims(X, Y_near);
  Eigen::MatrixXd out = forward_batch(m, X);
  double loss = (out - Y_near).rowwise().squaredNorm().mean();
  if (lambda != 0.0) {
    check_pair_dims(X, Y_far);
    Eigen::VectorXd far_sq = (out - Y_far).rowwise().squaredNorm();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < far_sq.size(); ++i) acc += std::min(far_sq(i), cap);
    loss -= lambda * acc / static_cast<double>(X.rows());
  }
  return loss;
}

MapperGradients centroid_gradient(const MlpMapper& m, const Eigen::MatrixXd& X,
                                  const Eigen::MatrixXd& Y_near, const Eigen::MatrixXd& Y_far,
                                  double lambda, double cap) {
  check_pair_dims(X, Y_near);
  Eigen::MatrixXd pre = hidden_pre(m, X);
  Eigen::MatrixXd out = (pre.cwiseMax(0.0) * m.w_output.transpose()).rowwise() + m.b_output.transpose();
  const double inv_m = 1.0 / static_cast<double>(X.rows());
  Eigen::MatrixXd dOut = 2.0 * inv_m * (out - Y_near);
  if (lambda != 0.0) {
    check_pair_dims(X, Y_far);
    Eigen::MatrixXd rf = out - Y_far;
    for (Eigen::Index i = 0; i < rf.rows(); ++i) {
      // min(.,cap) kink: the capped branch contributes zero gradient
      if (rf.row(i).squaredNorm() < cap) dOut.row(i) -= 2.0 * lambda * inv_m * rf.row(i);
    }
  }
  return backprop(m, X, pre, dOut);
}

MlpMapper train_mapper(const Embedding& source, const Embedding& target,
                       const MapperTrainConfig& cfg, MapperTrainLog* log) {
  std::vector<std::string> vocab = common_vocab(source, target);
  if (vocab.size() < 2) throw std::invalid_argument("common vocabulary too small to train on");
  Eigen::MatrixXd X = rows_as_matrix(source, vocab);
  Eigen::MatrixXd Y = rows_as_matrix(target, vocab);
  return sgd_train(X, Y, Eigen::MatrixXd(), 0.0, cfg, log);
}

Eigen::VectorXd centroid_target(const Embedding& target_emb, const std::string& word,
                                const CentroidConfig& cfg, CentroidSide side) {
  if (!target_emb.contains(word))
    throw std::invalid_argument("word '" + word + "' not in target vocabulary");
  CentroidConfig one = cfg;
  std::vector<std::string> single{word};
  if (side == CentroidSide::kNear) {
    return build_centroid_targets(target_emb, single, one, false).near.row(0);
  }
  // near targets are always computed; keep k_near legal for far-only queries
  one.k_near = 1;
  return build_centroid_targets(target_emb, single, one, true).far.row(0);
}

MlpMapper train_centroid_mapper(const Embedding& source, const Embedding& target,
                                const MapperTrainConfig& cfg, const CentroidConfig& ccfg,
                                MapperTrainLog* log) {
  std::vector<std::string> vocab = common_vocab(source, target);
  if (vocab.size() < 2) throw std::invalid_argument("common vocabulary too small to train on");
  const bool want_far = ccfg.variant == CentroidVariant::kCentroid2;
  CentroidTargets targets = build_centroid_targets(target, vocab, ccfg, want_far);
  Eigen::MatrixXd X = rows_as_matrix(source, vocab);
  double lambda = want_far ? ccfg.far_weight : 0.0;
  return sgd_train(X, targets.near, targets.far, lambda, cfg, log);
}

LinearMapper train_linear_mapper(const Embedding& source, const Embedding& target) {
  std::vector<std::string> vocab = common_vocab(source, target);
  if (vocab.size() < 2) throw std::invalid_argument("common vocabulary too small to train on");
  Eigen::MatrixXd X = rows_as_matrix(source, vocab);
  Eigen::MatrixXd Y = rows_as_matrix(target, vocab);

  // Augment with a ones column for the bias; solve the normal equations.
  Eigen::MatrixXd Xa(X.rows(), X.cols() + 1);
  Xa << X, Eigen::VectorXd::Ones(X.rows());
  Eigen::MatrixXd gram = Xa.transpose() * Xa;
  gram.diagonal().array() += 1e-10;  // guards rank-deficient vocabularies
  Eigen::MatrixXd sol = gram.ldlt().solve(Xa.transpose() * Y);  // (d_in+1) x d_out

  LinearMapper m;
  m.weight = sol.topRows(X.cols()).transpose();
  m.bias = sol.row(X.cols()).transpose();
  return m;
}

namespace {

template <typename Mapper>
Embedding build_ate_impl(const Embedding& source, const Mapper& m, const Embedding* copy_common) {
  if (static_cast<Eigen::Index>(source.dim()) != m.input_dim())
    throw std::invalid_argument("mapper input dimension does not match source embedding");
  const std::size_t d_out = static_cast<std::size_t>(m.output_dim());
  Embedding out(d_out);
  out.reserve(source.size());

  const Eigen::Index block = 1024;
  std::vector<float> buf(d_out);
  for (std::size_t b0 = 0; b0 < source.size(); b0 += static_cast<std::size_t>(block)) {
    const std::size_t bn = std::min(source.size() - b0, static_cast<std::size_t>(block));
    Eigen::MatrixXd X(static_cast<Eigen::Index>(bn), static_cast<Eigen::Index>(source.dim()));
    for (std::size_t i = 0; i < bn; ++i) {
      auto r = source.row(b0 + i);
      for (std::size_t d = 0; d < r.size(); ++d)
        X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = r[d];
    }
    Eigen::MatrixXd Y = forward_batch(m, X);
    for (std::size_t i = 0; i < bn; ++i) {
      const std::string& w = source.word_at(b0 + i);
      if (copy_common != nullptr) {
        if (auto v = copy_common->vector(w)) {
          out.add(w, *v);
          continue;
        }
      }
      for (std::size_t d = 0; d < d_out; ++d)
        buf[d] = static_cast<float>(Y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)));
      out.add(w, buf);
    }
  }
  return out;
}

}  // namespace

Embedding build_ate(const Embedding& source, const MlpMapper& m, const Embedding* copy_common) {
  if (copy_common != nullptr &&
      static_cast<Eigen::Index>(copy_common->dim()) != m.output_dim())
    throw std::invalid_argument("copy_common dimension does not match mapper output");
  return build_ate_impl(source, m, copy_common);
}

Embedding build_ate(const Embedding& source, const LinearMapper& m, const Embedding* copy_common) {
  if (copy_common != nullptr &&
      static_cast<Eigen::Index>(copy_common->dim()) != m.output_dim())
    throw std::invalid_argument("copy_common dimension does not match mapper output");
  return build_ate_impl(source, m, copy_common);
}

Embedding build_partial_adjusted(const Embedding& source, const Embedding& target,
                                 const MlpMapper& m) {
  if (m.input_dim() != m.output_dim())
    throw std::invalid_argument("partial adjustment needs d_out == d_in (hybrid space undefined)");
  if (static_cast<Eigen::Index>(source.dim()) != m.input_dim())
    throw std::invalid_argument("mapper input dimension does not match source embedding");

  Embedding out(source.dim());
  out.reserve(source.size());
  std::vector<float> buf(source.dim());
  for (std::size_t i = 0; i < source.size(); ++i) {
    const std::string& w = source.word_at(i);
    if (target.contains(w)) {
      Eigen::VectorXd x(static_cast<Eigen::Index>(source.dim()));
      auto r = source.row(i);
      for (std::size_t d = 0; d < r.size(); ++d) x(static_cast<Eigen::Index>(d)) = r[d];
      Eigen::VectorXd y = forward(m, x);
      for (std::size_t d = 0; d < buf.size(); ++d)
        buf[d] = static_cast<float>(y(static_cast<Eigen::Index>(d)));
      out.add(w, buf);
    } else {
      out.add(w, source.row(i));  // untouched, bit-identical
    }
  }
  return out;
}

void save_mapper(const MlpMapper& m, const std::string& path) {
  Checkpoint ckpt;
  ckpt.kind = "mlp_mapper";
  ckpt.tensors["w_hidden"] = m.w_hidden;
  ckpt.tensors["b_hidden"] = m.b_hidden;
  ckpt.tensors["w_output"] = m.w_output;
  ckpt.tensors["b_output"] = m.b_output;
  ckpt.save(path);
}

void save_mapper(const LinearMapper& m, const std::string& path) {
  Checkpoint ckpt;
  ckpt.kind = "linear_mapper";
  ckpt.tensors["weight"] = m.weight;
  ckpt.tensors["bias"] = m.bias;
  ckpt.save(path);
}

MlpMapper load_mlp_mapper(const std::string& path) {
  Checkpoint ckpt = Checkpoint::load(path);
  ckpt.require_kind("mlp_mapper");
  MlpMapper m;
  m.w_hidden = ckpt.tensor("w_hidden");
  m.b_hidden = ckpt.tensor("b_hidden");
  m.w_output = ckpt.tensor("w_output");
  m.b_output = ckpt.tensor("b_output");
  return m;
}

LinearMapper load_linear_mapper(const std::string& path) {
  Checkpoint ckpt = Checkpoint::load(path);
  ckpt.require_kind("linear_mapper");
  LinearMapper m;
  m.weight = ckpt.tensor("weight");
  m.bias = ckpt.tensor("bias");
  return m;
}

bool checkpoint_is_linear_mapper(const std::string& path) {
  return Checkpoint::load(path).kind == "linear_mapper";
}

}  // namespace depembed
