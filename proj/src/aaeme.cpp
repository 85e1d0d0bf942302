#include "depembed/aaeme.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "depembed/checkpoint.hpp"

namespace depembed {

namespace {

Eigen::MatrixXd rows_as_matrix(const Embedding& emb, const std::vector<std::string>& words,
                               bool normalize) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(words.size()),
                      static_cast<Eigen::Index>(emb.dim()));
  for (std::size_t i = 0; i < words.size(); ++i) {
    auto r = *emb.vector(words[i]);
    for (std::size_t d = 0; d < r.size(); ++d)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = r[d];
    if (normalize) {
      double n = out.row(static_cast<Eigen::Index>(i)).norm();
      if (n > 0.0) out.row(static_cast<Eigen::Index>(i)) /= n;
    }
  }
  return out;
}

Eigen::MatrixXd encode(const Eigen::MatrixXd& X, const Eigen::MatrixXd& w,
                       const Eigen::VectorXd& b, bool use_tanh) {
  Eigen::MatrixXd pre = (X * w.transpose()).rowwise() + b.transpose();
  return use_tanh ? pre.array().tanh().matrix() : pre;
}

void check_dims(const AaemeModel& model, const Eigen::MatrixXd& X1, const Eigen::MatrixXd& X2) {
  if (X1.rows() == 0) throw std::invalid_argument("empty batch");
  if (X1.rows() != X2.rows()) throw std::invalid_argument("row counts differ");
  if (X1.cols() != model.source1_dim() || X2.cols() != model.source2_dim())
    throw std::invalid_argument("source dimension mismatch");
}

}  // namespace

Eigen::VectorXd meta_embed(const AaemeModel& model, const Eigen::VectorXd& x1,
                           const Eigen::VectorXd& x2) {
  if (x1.size() != model.source1_dim() || x2.size() != model.source2_dim())
    throw std::invalid_argument("source dimension mismatch");
  Eigen::VectorXd a1 = model.enc1_w * x1 + model.enc1_b;
  Eigen::VectorXd a2 = model.enc2_w * x2 + model.enc2_b;
  if (model.tanh_encoders) {
    a1 = a1.array().tanh();
    a2 = a2.array().tanh();
  }
  return 0.5 * (a1 + a2);
}

Eigen::MatrixXd meta_embed_batch(const AaemeModel& model, const Eigen::MatrixXd& X1,
                                 const Eigen::MatrixXd& X2) {
  check_dims(model, X1, X2);
  return 0.5 * (encode(X1, model.enc1_w, model.enc1_b, model.tanh_encoders) +
                encode(X2, model.enc2_w, model.enc2_b, model.tanh_encoders));
}

double reconstruction_loss(const AaemeModel& model, const Eigen::MatrixXd& X1,
                           const Eigen::MatrixXd& X2) {
  Eigen::MatrixXd meta = meta_embed_batch(model, X1, X2);
  Eigen::MatrixXd r1 = ((meta * model.dec1_w.transpose()).rowwise() + model.dec1_b.transpose()) - X1;
  Eigen::MatrixXd r2 = ((meta * model.dec2_w.transpose()).rowwise() + model.dec2_b.transpose()) - X2;
  return (r1.rowwise().squaredNorm() + r2.rowwise().squaredNorm()).mean();
}

AaemeGradients aaeme_gradient(const AaemeModel& model, const Eigen::MatrixXd& X1,
                              const Eigen::MatrixXd& X2) {
  check_dims(model, X1, X2);
  const double inv_m = 1.0 / static_cast<double>(X1.rows());

  Eigen::MatrixXd a1 = encode(X1, model.enc1_w, model.enc1_b, model.tanh_encoders);
  Eigen::MatrixXd a2 = encode(X2, model.enc2_w, model.enc2_b, model.tanh_encoders);
  Eigen::MatrixXd meta = 0.5 * (a1 + a2);

  Eigen::MatrixXd r1 = ((meta * model.dec1_w.transpose()).rowwise() + model.dec1_b.transpose()) - X1;
  Eigen::MatrixXd r2 = ((meta * model.dec2_w.transpose()).rowwise() + model.dec2_b.transpose()) - X2;
  Eigen::MatrixXd dr1 = 2.0 * inv_m * r1;
  Eigen::MatrixXd dr2 = 2.0 * inv_m * r2;

  AaemeGradients g;
  g.dec1_w = dr1.transpose() * meta;
  g.dec1_b = dr1.colwise().sum().transpose();
  g.dec2_w = dr2.transpose() * meta;
  g.dec2_b = dr2.colwise().sum().transpose();

  Eigen::MatrixXd dmeta = dr1 * model.dec1_w + dr2 * model.dec2_w;
  Eigen::MatrixXd da1 = 0.5 * dmeta;
  Eigen::MatrixXd da2 = 0.5 * dmeta;
  if (model.tanh_encoders) {
    da1 = da1.cwiseProduct((1.0 - a1.array().square()).matrix());
    da2 = da2.cwiseProduct((1.0 - a2.array().square()).matrix());
  }
  g.enc1_w = da1.transpose() * X1;
  g.enc1_b = da1.colwise().sum().transpose();
  g.enc2_w = da2.transpose() * X2;
  g.enc2_b = da2.colwise().sum().transpose();
  return g;
}

AaemeModel init_aaeme(Eigen::Index d1, Eigen::Index d2, Eigen::Index meta_dim,
                      const AaemeConfig& cfg) {
  if (d1 < 1 || d2 < 1 || meta_dim < 1) throw std::invalid_argument("invalid AAEME dimensions");
  AaemeModel m;
  m.tanh_encoders = cfg.tanh_encoders;
  m.normalized_inputs = cfg.normalize_inputs;
  std::mt19937 rng(static_cast<std::uint32_t>(cfg.seed));
  auto glorot = [&](Eigen::Index rows, Eigen::Index cols) {
    double s = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::uniform_real_distribution<double> dist(-s, s);
    Eigen::MatrixXd w(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = dist(rng);
    return w;
  };
  m.enc1_w = glorot(meta_dim, d1);
  m.enc2_w = glorot(meta_dim, d2);
  m.dec1_w = glorot(d1, meta_dim);
  m.dec2_w = glorot(d2, meta_dim);
  m.enc1_b = Eigen::VectorXd::Zero(meta_dim);
  m.enc2_b = Eigen::VectorXd::Zero(meta_dim);
  m.dec1_b = Eigen::VectorXd::Zero(d1);
  m.dec2_b = Eigen::VectorXd::Zero(d2);
  return m;
}

AaemeModel train_aaeme(const Embedding& src1, const Embedding& src2, const AaemeConfig& cfg,
                       AaemeTrainLog* log) {
  std::vector<std::string> vocab = common_vocab(src1, src2);
  if (vocab.size() < 2) throw std::invalid_argument("common vocabulary too small to train on");

  Eigen::MatrixXd X1 = rows_as_matrix(src1, vocab, cfg.normalize_inputs);
  Eigen::MatrixXd X2 = rows_as_matrix(src2, vocab, cfg.normalize_inputs);
  const Eigen::Index n = X1.rows();
  const Eigen::Index meta = cfg.meta_dim > 0 ? cfg.meta_dim : X1.cols();

  AaemeModel model = init_aaeme(X1.cols(), X2.cols(), meta, cfg);

  std::mt19937 rng(static_cast<std::uint32_t>(cfg.seed ^ 0x5bd1e995u));
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);

  Eigen::Index n_val =
      static_cast<Eigen::Index>(std::floor(cfg.validation_fraction * static_cast<double>(n)));
  if (n_val >= n) n_val = n - 1;

  auto gather = [](const Eigen::MatrixXd& M, const std::vector<Eigen::Index>& idx) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), M.cols());
    for (std::size_t i = 0; i < idx.size(); ++i)
      out.row(static_cast<Eigen::Index>(i)) = M.row(idx[i]);
    return out;
  };
  std::vector<Eigen::Index> val_idx(perm.begin(), perm.begin() + n_val);
  std::vector<Eigen::Index> train_idx(perm.begin() + n_val, perm.end());
  Eigen::MatrixXd X1tr = gather(X1, train_idx), X2tr = gather(X2, train_idx);
  Eigen::MatrixXd X1mon = n_val > 0 ? gather(X1, val_idx) : X1tr;
  Eigen::MatrixXd X2mon = n_val > 0 ? gather(X2, val_idx) : X2tr;

  double lr = cfg.learning_rate;
  double best_loss = std::numeric_limits<double>::infinity();
  AaemeModel best;
  bool have_best = false;
  std::size_t bad_epochs = 0;

  if (log) {
    log->initial_loss = reconstruction_loss(model, X1mon, X2mon);
    log->epoch_losses.clear();
  }

  const std::size_t batch = std::max<std::size_t>(1, cfg.batch_size);
  std::vector<Eigen::Index> order(train_idx.size());
  std::iota(order.begin(), order.end(), 0);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t b0 = 0; b0 < order.size(); b0 += batch) {
      const std::size_t bn = std::min(order.size() - b0, batch);
      Eigen::MatrixXd B1(static_cast<Eigen::Index>(bn), X1tr.cols());
      Eigen::MatrixXd B2(static_cast<Eigen::Index>(bn), X2tr.cols());
      for (std::size_t i = 0; i < bn; ++i) {
        B1.row(static_cast<Eigen::Index>(i)) = X1tr.row(order[b0 + i]);
        B2.row(static_cast<Eigen::Index>(i)) = X2tr.row(order[b0 + i]);
      }
      AaemeGradients g = aaeme_gradient(model, B1, B2);
      model.enc1_w -= lr * g.enc1_w;
      model.enc1_b -= lr * g.enc1_b;
      model.enc2_w -= lr * g.enc2_w;
      model.enc2_b -= lr * g.enc2_b;
      model.dec1_w -= lr * g.dec1_w;
      model.dec1_b -= lr * g.dec1_b;
      model.dec2_w -= lr * g.dec2_w;
      model.dec2_b -= lr * g.dec2_b;
    }

    double loss = reconstruction_loss(model, X1mon, X2mon);
    if (log) {
      log->epoch_losses.push_back(loss);
      log->epochs_run = epoch + 1;
    }
    if (loss < best_loss - 1e-12) {
      best_loss = loss;
      best = model;
      have_best = true;
      bad_epochs = 0;
    } else {
      ++bad_epochs;
      if (cfg.plateau_epochs > 0 && bad_epochs % cfg.plateau_epochs == 0) lr *= 0.5;
      if (cfg.patience > 0 && bad_epochs >= cfg.patience) break;
    }
  }
  return have_best ? best : model;
}

Embedding build_meta_embedding(const AaemeModel& model, const Embedding& src1,
                               const Embedding& src2) {
  std::vector<std::string> vocab = common_vocab(src1, src2);
  if (vocab.empty()) throw std::invalid_argument("empty common vocabulary");

  Eigen::MatrixXd X1 = rows_as_matrix(src1, vocab, model.normalized_inputs);
  Eigen::MatrixXd X2 = rows_as_matrix(src2, vocab, model.normalized_inputs);
  Eigen::MatrixXd meta = meta_embed_batch(model, X1, X2);

  Embedding out(static_cast<std::size_t>(model.meta_dim()));
  out.reserve(vocab.size());
  std::vector<float> buf(static_cast<std::size_t>(model.meta_dim()));
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    for (Eigen::Index d = 0; d < meta.cols(); ++d)
      buf[static_cast<std::size_t>(d)] = static_cast<float>(meta(static_cast<Eigen::Index>(i), d));
    out.add(vocab[i], buf);
  }
  return out;
}

void save_aaeme(const AaemeModel& model, const std::string& path) {
  Checkpoint ckpt;
  ckpt.kind = "aaeme";
  ckpt.scalars["tanh_encoders"] = model.tanh_encoders ? 1.0 : 0.0;
  ckpt.scalars["normalized_inputs"] = model.normalized_inputs ? 1.0 : 0.0;
  ckpt.tensors["enc1_w"] = model.enc1_w;
  ckpt.tensors["enc1_b"] = model.enc1_b;
  ckpt.tensors["enc2_w"] = model.enc2_w;
  ckpt.tensors["enc2_b"] = model.enc2_b;
  ckpt.tensors["dec1_w"] = model.dec1_w;
  ckpt.tensors["dec1_b"] = model.dec1_b;
  ckpt.tensors["dec2_w"] = model.dec2_w;
  ckpt.tensors["dec2_b"] = model.dec2_b;
  ckpt.save(path);
}

AaemeModel load_aaeme(const std::string& path) {
  Checkpoint ckpt = Checkpoint::load(path);
  ckpt.require_kind("aaeme");
  AaemeModel m;
  m.tanh_encoders = ckpt.scalar("tanh_encoders") != 0.0;
  m.normalized_inputs = ckpt.scalar("normalized_inputs") != 0.0;
  m.enc1_w = ckpt.tensor("enc1_w");
  m.enc1_b = ckpt.tensor("enc1_b");
  m.enc2_w = ckpt.tensor("enc2_w");
  m.enc2_b = ckpt.tensor("enc2_b");
  m.dec1_w = ckpt.tensor("dec1_w");
  m.dec1_b = ckpt.tensor("dec1_b");
  m.dec2_w = ckpt.tensor("dec2_w");
  m.dec2_b = ckpt.tensor("dec2_b");
  return m;
}

}  // namespace depembed
