#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace depembed {

enum class ModelFamily { kNaiveBayes, kLogReg, kLinearSvm, kRbfSvm };

ModelFamily model_family_from_string(const std::string& name);
std::string to_string(ModelFamily family);

// Multinomial Naive Bayes with Laplace smoothing over nonnegative features.
struct NbModel {
  double log_prior_neg = 0.0;
  double log_prior_pos = 0.0;
  Eigen::VectorXd log_prob_neg;  // per-feature log probabilities, class 0
  Eigen::VectorXd log_prob_pos;  // class 1
  double alpha = 1.0;
};

struct LinearModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  enum class Objective { kLogReg, kHinge } objective = Objective::kLogReg;
  double c_value = 1.0;
  double final_objective = 0.0;
};

struct KernelSvmModel {
  Eigen::MatrixXd support_vectors;  // one row per support vector
  Eigen::VectorXd dual_coef;        // alpha_i * y_i
  double bias = 0.0;
  double gamma = 1.0;
  double c_value = 1.0;
  double kkt_violation = 0.0;  // max-violating-pair gap at termination
  double alpha_dot_y = 0.0;    // sum alpha_i y_i after training
};

using AnyModel = std::variant<NbModel, LinearModel, KernelSvmModel>;

// Hyperparameter grid from the experimental protocol:
// C in {2^-9, 2^-7, ..., 2^5}, gamma in {2^-11, 2^-9, ..., 2^1} plus 2^2.
struct ParamGrid {
  std::vector<double> c_values;
  std::vector<double> gamma_values;

  static ParamGrid paper_default();
  static ParamGrid single(double c, double gamma);
};

struct SolverOptions {
  std::size_t logreg_max_iter = 10000;
  double logreg_grad_tol = 1e-6;
  std::size_t lsvm_max_iter = 100000;
  double lsvm_obj_tol = 1e-8;
  double svm_tol = 1e-3;      // KKT stopping tolerance
  std::size_t svm_cache_mb = 64;
  std::size_t svm_max_iter = 1000000;
};

NbModel train_multinomial_nb(const Eigen::MatrixXd& X, const std::vector<int>& y,
                             double alpha = 1.0);

// min 0.5 ||w||^2 + C sum log(1 + exp(-yhat (w.x + b))), solved by L-BFGS
// with backtracking; stops at gradient norm <= logreg_grad_tol.
LinearModel train_logreg(const Eigen::MatrixXd& X, const std::vector<int>& y, double c,
                         const SolverOptions& opts = {});

// min 0.5 ||w||^2 + C sum max(0, 1 - yhat (w.x + b)) by deterministic
// full-batch subgradient descent with tail averaging; stops when the
// objective's relative change falls below lsvm_obj_tol.
LinearModel train_linear_svm(const Eigen::MatrixXd& X, const std::vector<int>& y, double c,
                             const SolverOptions& opts = {});

// SMO on the dual with K(a,b) = exp(-gamma ||a-b||^2); working-set selection
// by maximal KKT violating pair.
KernelSvmModel train_rbf_svm(const Eigen::MatrixXd& X, const std::vector<int>& y, double c,
                             double gamma, const SolverOptions& opts = {});

// Positive decision scores predict label 1; exactly zero resolves to 0.
// For NB/LR the score is the log posterior-odds (threshold 0 <=> posterior 0.5).
Eigen::VectorXd decision_scores(const NbModel& m, const Eigen::MatrixXd& X);
Eigen::VectorXd decision_scores(const LinearModel& m, const Eigen::MatrixXd& X);
Eigen::VectorXd decision_scores(const KernelSvmModel& m, const Eigen::MatrixXd& X);
Eigen::VectorXd decision_scores(const AnyModel& m, const Eigen::MatrixXd& X);

std::vector<int> predict(const AnyModel& m, const Eigen::MatrixXd& X);

double logreg_objective(const Eigen::MatrixXd& X, const std::vector<int>& y, double c,
                        const Eigen::VectorXd& w, double b);
double hinge_objective(const Eigen::MatrixXd& X, const std::vector<int>& y, double c,
                       const Eigen::VectorXd& w, double b);

struct GridCell {
  double c_value = 0.0;
  double gamma = 0.0;  // NaN when the family has no gamma
  std::vector<double> fold_f1;
  double mean_f1 = 0.0;
  std::vector<std::vector<int>> fold_predictions;  // per fold, aligned with fold_truths
  std::vector<std::vector<int>> fold_truths;
};

struct GridSearchResult {
  double best_c = 0.0;
  double best_gamma = 0.0;
  double best_mean_f1 = 0.0;
  std::size_t best_cell = 0;
  std::vector<GridCell> cells;
  AnyModel refit;
  std::size_t folds_used = 0;
};

// Exhaustive grid evaluation with stratified k-fold CV; best cell = highest
// mean F1, ties to smaller C then smaller gamma; refit on the full split.
GridSearchResult grid_search_cv(const Eigen::MatrixXd& X, const std::vector<int>& y,
                                ModelFamily family, const ParamGrid& grid, std::size_t folds,
                                std::uint64_t seed, const SolverOptions& opts = {});

void save_model(const AnyModel& m, const std::string& path);
AnyModel load_model(const std::string& path);

}  // namespace depembed
