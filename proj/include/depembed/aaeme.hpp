#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "depembed/embedding.hpp"

namespace depembed {

// Averaged autoencoded meta-embedding: two encoders project the source
// vectors into a shared meta space, the per-word meta vector is the average
// of the encodings, and two decoders reconstruct the original vectors.
struct AaemeModel {
  Eigen::MatrixXd enc1_w, enc2_w;  // meta x d1, meta x d2
  Eigen::VectorXd enc1_b, enc2_b;
  Eigen::MatrixXd dec1_w, dec2_w;  // d1 x meta, d2 x meta
  Eigen::VectorXd dec1_b, dec2_b;
  bool tanh_encoders = false;
  bool normalized_inputs = true;  // whether training L2-normalized each input row

  Eigen::Index meta_dim() const { return enc1_w.rows(); }
  Eigen::Index source1_dim() const { return enc1_w.cols(); }
  Eigen::Index source2_dim() const { return enc2_w.cols(); }
};

struct AaemeConfig {
  Eigen::Index meta_dim = 0;  // 0 = use source1's dimension
  bool tanh_encoders = false;
  bool normalize_inputs = true;
  std::size_t epochs = 100;
  std::size_t batch_size = 128;
  double learning_rate = 1e-3;
  std::uint64_t seed = 1;
  double validation_fraction = 0.1;
  std::size_t plateau_epochs = 2;
  std::size_t patience = 5;
};

struct AaemeGradients {
  Eigen::MatrixXd enc1_w, enc2_w, dec1_w, dec2_w;
  Eigen::VectorXd enc1_b, enc2_b, dec1_b, dec2_b;
};

struct AaemeTrainLog {
  double initial_loss = 0.0;
  std::vector<double> epoch_losses;
  std::size_t epochs_run = 0;
};

// (enc1(x1) + enc2(x2)) / 2. Raw operation: callers normalize beforehand
// when the model was trained on normalized inputs.
Eigen::VectorXd meta_embed(const AaemeModel& model, const Eigen::VectorXd& x1,
                           const Eigen::VectorXd& x2);
Eigen::MatrixXd meta_embed_batch(const AaemeModel& model, const Eigen::MatrixXd& X1,
                                 const Eigen::MatrixXd& X2);

// mean_i [ ||dec1(meta_i) - x1_i||^2 + ||dec2(meta_i) - x2_i||^2 ]
double reconstruction_loss(const AaemeModel& model, const Eigen::MatrixXd& X1,
                           const Eigen::MatrixXd& X2);

AaemeGradients aaeme_gradient(const AaemeModel& model, const Eigen::MatrixXd& X1,
                              const Eigen::MatrixXd& X2);

AaemeModel init_aaeme(Eigen::Index d1, Eigen::Index d2, Eigen::Index meta_dim,
                      const AaemeConfig& cfg);

// Minimizes the reconstruction loss over the common vocabulary with
// mini-batch SGD (optimizer defaults match the mapper's). Throws when the
// common vocabulary has fewer than two words.
AaemeModel train_aaeme(const Embedding& src1, const Embedding& src2, const AaemeConfig& cfg,
                       AaemeTrainLog* log = nullptr);

// vocab = common_vocab(src1, src2), vector(w) = meta_embed(src1(w), src2(w)).
Embedding build_meta_embedding(const AaemeModel& model, const Embedding& src1,
                               const Embedding& src2);

void save_aaeme(const AaemeModel& model, const std::string& path);
AaemeModel load_aaeme(const std::string& path);

}  // namespace depembed
