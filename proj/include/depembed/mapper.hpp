#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "depembed/embedding.hpp"

namespace depembed {

// Single-hidden-layer regressor mapping source-embedding vectors into the
// target embedding's space: y = w_output * relu(w_hidden * x + b_hidden) + b_output.
// ReLU is applied on the hidden layer only; the output layer is linear so
// that targets with negative components stay reachable.
struct MlpMapper {
  Eigen::MatrixXd w_hidden;  // h x d_in
  Eigen::VectorXd b_hidden;  // h
  Eigen::MatrixXd w_output;  // d_out x h
  Eigen::VectorXd b_output;  // d_out

  Eigen::Index input_dim() const { return w_hidden.cols(); }
  Eigen::Index output_dim() const { return w_output.rows(); }
  Eigen::Index hidden_units() const { return w_hidden.rows(); }
};

// Affine least-squares alternative; no hidden layer.
struct LinearMapper {
  Eigen::MatrixXd weight;  // d_out x d_in
  Eigen::VectorXd bias;    // d_out

  Eigen::Index input_dim() const { return weight.cols(); }
  Eigen::Index output_dim() const { return weight.rows(); }
};

struct MapperTrainConfig {
  Eigen::Index hidden_units = 400;
  std::size_t epochs = 100;
  std::size_t batch_size = 128;
  double learning_rate = 1e-3;
  std::uint64_t seed = 1;
  double validation_fraction = 0.1;  // held out from the word pairs for plateau detection
  std::size_t plateau_epochs = 2;    // epochs without improvement before halving the rate
  std::size_t patience = 5;          // epochs without improvement before stopping
};

enum class CentroidVariant { kCentroid1, kCentroid2 };

struct CentroidConfig {
  std::size_t k_near = 10;
  std::size_t k_far = 10;
  double far_weight = 0.1;  // lambda; unused for Centroid1
  CentroidVariant variant = CentroidVariant::kCentroid1;
};

struct MapperGradients {
  Eigen::MatrixXd w_hidden;
  Eigen::VectorXd b_hidden;
  Eigen::MatrixXd w_output;
  Eigen::VectorXd b_output;
};

struct MapperTrainLog {
  double initial_loss = 0.0;            // on the validation (or full) set before training
  std::vector<double> epoch_losses;     // same set, after each epoch
  std::size_t epochs_run = 0;
  double far_cap = 0.0;                 // Centroid2 cap M; 0 when unused
};

Eigen::VectorXd forward(const MlpMapper& m, const Eigen::VectorXd& x);
// Rows of X are inputs; returns one output row per input row.
Eigen::MatrixXd forward_batch(const MlpMapper& m, const Eigen::MatrixXd& X);

Eigen::VectorXd forward(const LinearMapper& m, const Eigen::VectorXd& x);
Eigen::MatrixXd forward_batch(const LinearMapper& m, const Eigen::MatrixXd& X);

// Mean over rows of the squared residual norm (Eq. of the MSE fit).
double mse_loss(const MlpMapper& m, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

// Backpropagated gradients of mse_loss. ReLU subgradient at 0 is 0.
MapperGradients gradient(const MlpMapper& m, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

// Centroid objective: mean_i [ ||g(x_i)-near_i||^2 - lambda*min(||g(x_i)-far_i||^2, cap) ].
// Y_far may be empty when lambda is 0.
double centroid_loss(const MlpMapper& m, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y_near,
                     const Eigen::MatrixXd& Y_far, double lambda, double cap);
MapperGradients centroid_gradient(const MlpMapper& m, const Eigen::MatrixXd& X,
                                  const Eigen::MatrixXd& Y_near, const Eigen::MatrixXd& Y_far,
                                  double lambda, double cap);

// Glorot-uniform weights, zero biases.
MlpMapper init_mapper(Eigen::Index d_in, Eigen::Index d_out, Eigen::Index hidden,
                      std::uint64_t seed);

// Fits the mapper on {(TE(w), DE(w)) : w in common vocab} with mini-batch SGD.
// Throws when the common vocabulary is empty.
MlpMapper train_mapper(const Embedding& source, const Embedding& target,
                       const MapperTrainConfig& cfg, MapperTrainLog* log = nullptr);

// Mean of DE(w) and its k_near nearest neighbours (near), or of the k_far
// most distant words excluding w (far). Euclidean distances in the target
// space; ties break lexicographically.
enum class CentroidSide { kNear, kFar };
Eigen::VectorXd centroid_target(const Embedding& target_emb, const std::string& word,
                                const CentroidConfig& cfg, CentroidSide side);

// Same optimizer as train_mapper but against neighbourhood centroids;
// Centroid2 additionally pushes away from distant-word centroids with the
// capped negated term (cap = 10x the mean near-loss at initialization).
MlpMapper train_centroid_mapper(const Embedding& source, const Embedding& target,
                                const MapperTrainConfig& cfg, const CentroidConfig& ccfg,
                                MapperTrainLog* log = nullptr);

// Plain least-squares fit of an affine map on the common vocabulary.
LinearMapper train_linear_mapper(const Embedding& source, const Embedding& target);

// Applies the mapper to every source word: vocab(ATE) = vocab(source).
// When copy_common is non-null, words present in it take its vectors
// directly instead of the mapped prediction.
Embedding build_ate(const Embedding& source, const MlpMapper& m,
                    const Embedding* copy_common = nullptr);
Embedding build_ate(const Embedding& source, const LinearMapper& m,
                    const Embedding* copy_common = nullptr);

// Replaces only the common-vocabulary vectors with mapped predictions and
// keeps every other source vector bit-identical. Requires d_out == d_in.
Embedding build_partial_adjusted(const Embedding& source, const Embedding& target,
                                 const MlpMapper& m);

void save_mapper(const MlpMapper& m, const std::string& path);
void save_mapper(const LinearMapper& m, const std::string& path);
MlpMapper load_mlp_mapper(const std::string& path);
LinearMapper load_linear_mapper(const std::string& path);
bool checkpoint_is_linear_mapper(const std::string& path);

}  // namespace depembed
