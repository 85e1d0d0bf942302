#include "depembed/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "depembed/checkpoint.hpp"
#include "depembed/metrics.hpp"
#include "depembed/splits.hpp"

namespace depembed {

namespace {

// +1/-1 view of {1,0} labels.
Eigen::VectorXd signed_labels(const std::vector<int>& y) {
  Eigen::VectorXd s(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) s(static_cast<Eigen::Index>(i)) = y[i] == 1 ? 1.0 : -1.0;
  return s;
}

void check_two_classes(const std::vector<int>& y) {
  bool has_pos = false, has_neg = false;
  for (int v : y) {
    if (v == 1) has_pos = true;
    else if (v == 0) has_neg = true;
    else throw std::invalid_argument("labels must be 0 or 1");
  }
  if (!has_pos || !has_neg) throw std::invalid_argument("training data must contain both classes");
}

void check_xy(const Eigen::MatrixXd& X, const std::vector<int>& y) {
  if (static_cast<std::size_t>(X.rows()) != y.size())
    throw std::invalid_argument("feature rows and labels differ in count");
  if (X.rows() < 2) throw std::invalid_argument("need at least 2 training rows");
  if (!X.allFinite()) throw std::invalid_argument("non-finite feature value");
  check_two_classes(y);
}

double log1pexp(double z) {
  // log(1 + e^z), stable across the range
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

}  // namespace

ModelFamily model_family_from_string(const std::string& name) {
  if (name == "nb") return ModelFamily::kNaiveBayes;
  if (name == "lr") return ModelFamily::kLogReg;
  if (name == "lsvm") return ModelFamily::kLinearSvm;
  if (name == "rsvm") return ModelFamily::kRbfSvm;
  throw std::invalid_argument("unknown model family: " + name + " (expected nb|lr|lsvm|rsvm)");
}

std::string to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::kNaiveBayes: return "nb";
    case ModelFamily::kLogReg: return "lr";
    case ModelFamily::kLinearSvm: return "lsvm";
    case ModelFamily::kRbfSvm: return "rsvm";
  }
  return "?";
}

ParamGrid ParamGrid::paper_default() {
  ParamGrid g;
  for (int e = -9; e <= 5; e += 2) g.c_values.push_back(std::ldexp(1.0, e));
  for (int e = -11; e <= 1; e += 2) g.gamma_values.push_back(std::ldexp(1.0, e));
  g.gamma_values.push_back(std::ldexp(1.0, 2));
  return g;
}

ParamGrid ParamGrid::single(double c, double gamma) {
  ParamGrid g;
  g.c_values.push_back(c);
  g.gamma_values.push_back(gamma);
  return g;
}

NbModel train_multinomial_nb(const Eigen::MatrixXd& X, const std::vector<int>& y, double alpha) {
  check_xy(X, y);
  if (X.minCoeff() < 0.0)
    throw std::invalid_argument("multinomial NB requires nonnegative features");
  if (alpha <= 0.0) throw std::invalid_argument("smoothing alpha must be positive");

  const Eigen::Index f = X.cols();
  Eigen::VectorXd totals_pos = Eigen::VectorXd::Zero(f);
  Eigen::VectorXd totals_neg = Eigen::VectorXd::Zero(f);
  std::size_t n_pos = 0, n_neg = 0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    if (y[static_cast<std::size_t>(i)] == 1) {
      totals_pos += X.row(i).transpose();
      ++n_pos;
    } else {
      totals_neg += X.row(i).transpose();
      ++n_neg;
    }
  }

  NbModel m;
  m.alpha = alpha;
  m.log_prior_pos = std::log(static_cast<double>(n_pos) / static_cast<double>(y.size()));
  m.log_prior_neg = std::log(static_cast<double>(n_neg) / static_cast<double>(y.size()));
  double denom_pos = totals_pos.sum() + alpha * static_cast<double>(f);
  double denom_neg = totals_neg.sum() + alpha * static_cast<double>(f);
  m.log_prob_pos = ((totals_pos.array() + alpha) / denom_pos).log().matrix();
  m.log_prob_neg = ((totals_neg.array() + alpha) / denom_neg).log().matrix();
  return m;
}

double logreg_objective(const Eigen::MatrixXd& X, const std::vector<int>& y, double c,
                        const Eigen::VectorXd& w, double b) {
  Eigen::VectorXd s = signed_labels(y);
  Eigen::VectorXd margins = s.cwiseProduct(((X * w).array() + b).matrix());
  double loss = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) loss += log1pexp(-margins(i));
  return 0.5 * w.squaredNorm() + c * loss;
}

LinearModel train_logreg(const Eigen::MatrixXd& X, const std::vector<int>& y, double c,
                         const SolverOptions& opts) {
  check_xy(X, y);
  if (c <= 0.0) throw std::invalid_argument("C must be positive");
  const Eigen::Index f = X.cols();
  const Eigen::Index n = X.rows();
  Eigen::VectorXd s = signed_labels(y);

  // Parameters packed as [w; b].
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(f + 1);

  auto objective = [&](const Eigen::VectorXd& th) {
    Eigen::VectorXd w = th.head(f);
    double loss = 0.5 * w.squaredNorm();
    Eigen::VectorXd margins = s.cwiseProduct(((X * w).array() + th(f)).matrix());
    for (Eigen::Index i = 0; i < n; ++i) loss += c * log1pexp(-margins(i));
    return loss;
  };
  auto grad = [&](const Eigen::VectorXd& th) {
    Eigen::VectorXd w = th.head(f);
    Eigen::VectorXd margins = s.cwiseProduct(((X * w).array() + th(f)).matrix());
    Eigen::VectorXd sig(n);
    for (Eigen::Index i = 0; i < n; ++i) sig(i) = 1.0 / (1.0 + std::exp(margins(i)));
    Eigen::VectorXd coef = -c * s.cwiseProduct(sig);
    Eigen::VectorXd g(f + 1);
    g.head(f) = w + X.transpose() * coef;
    g(f) = coef.sum();
    return g;
  };

  // L-BFGS with a small history and Armijo backtracking.
  const std::size_t history = 10;
  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;

  double fx = objective(theta);
  Eigen::VectorXd g = grad(theta);

  for (std::size_t iter = 0; iter < opts.logreg_max_iter; ++iter) {
    if (g.norm() <= opts.logreg_grad_tol) break;

    // two-loop recursion
    Eigen::VectorXd q = g;
    std::vector<double> alpha_buf(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      alpha_buf[k] = rho_hist[k] * s_hist[k].dot(q);
      q -= alpha_buf[k] * y_hist[k];
    }
    if (!s_hist.empty()) {
      const auto& sk = s_hist.back();
      const auto& yk = y_hist.back();
      q *= sk.dot(yk) / yk.squaredNorm();
    }
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      double beta = rho_hist[k] * y_hist[k].dot(q);
      q += (alpha_buf[k] - beta) * s_hist[k];
    }
    Eigen::VectorXd dir = -q;
    double dg = dir.dot(g);
    if (dg > -1e-16) {  // not a descent direction; fall back to steepest descent
      dir = -g;
      dg = -g.squaredNorm();
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }

    double step = s_hist.empty() ? std::min(1.0, 1.0 / std::max(1e-12, g.norm())) : 1.0;
    double fx_new = fx;
    Eigen::VectorXd theta_new;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      theta_new = theta + step * dir;
      fx_new = objective(theta_new);
      if (fx_new <= fx + 1e-4 * step * dg) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no further progress at machine precision

    Eigen::VectorXd g_new = grad(theta_new);
    Eigen::VectorXd sk = theta_new - theta;
    Eigen::VectorXd yk = g_new - g;
    double sy = sk.dot(yk);
    if (sy > 1e-12) {
      s_hist.push_back(sk);
      y_hist.push_back(yk);
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    theta = theta_new;
    fx = fx_new;
    g = g_new;
  }

  LinearModel m;
  m.weights = theta.head(f);
  m.bias = theta(f);
  m.objective = LinearModel::Objective::kLogReg;
  m.c_value = c;
  m.final_objective = fx;
  return m;
}

double hinge_objective(const Eigen::MatrixXd& X, const std::vector<int>& y, double c,
                       const Eigen::VectorXd& w, double b) {
  Eigen::VectorXd s = signed_labels(y);
  Eigen::VectorXd margins = s.cwiseProduct(((X * w).array() + b).matrix());
  double hinge = (1.0 - margins.array()).max(0.0).sum();
  return 0.5 * w.squaredNorm() + c * hinge;
}

LinearModel train_linear_svm(const Eigen::MatrixXd& X, const std::vector<int>& y, double c,
                             const SolverOptions& opts) {
  check_xy(X, y);
  if (c <= 0.0) throw std::invalid_argument("C must be positive");
  const Eigen::Index f = X.cols();
  const Eigen::Index n = X.rows();
  Eigen::VectorXd s = signed_labels(y);

  // Normalized form: lambda/2 ||w||^2 + (1/n) sum hinge with
  // lambda = 1/(C n); the full objective is C*n times this one.
  const double lambda = 1.0 / (c * static_cast<double>(n));

  Eigen::VectorXd w = Eigen::VectorXd::Zero(f);
  double b = 0.0;
  // Tail average restarted at powers of two, so it always covers the most
  // recent half of the trajectory.
  Eigen::VectorXd avg_w = w;
  double avg_b = b;
  std::size_t avg_count = 1;
  std::size_t next_restart = 2;

  Eigen::VectorXd best_w = w;
  double best_b = b;
  double best_obj = hinge_objective(X, y, c, w, b);
  double last_check_obj = best_obj;

  for (std::size_t t = 0; t < opts.lsvm_max_iter; ++t) {
    Eigen::VectorXd margins = s.cwiseProduct(((X * w).array() + b).matrix());
    // Subgradient: the hinge kink at margin == 1 contributes zero.
    Eigen::VectorXd active = (margins.array() < 1.0).cast<double>().matrix();
    Eigen::VectorXd coef = s.cwiseProduct(active) / static_cast<double>(n);
    Eigen::VectorXd g_w = lambda * w - X.transpose() * coef;
    double g_b = -coef.sum();

    double eta = 1.0 / (lambda * static_cast<double>(t + 1));
    w -= eta * g_w;
    b -= eta * g_b;

    if (t + 1 == next_restart) {
      avg_w = w;
      avg_b = b;
      avg_count = 1;
      next_restart *= 2;
    } else {
      double frac = 1.0 / static_cast<double>(avg_count + 1);
      avg_w = (1.0 - frac) * avg_w + frac * w;
      avg_b = (1.0 - frac) * avg_b + frac * b;
      ++avg_count;
    }

    if ((t + 1) % 128 == 0 || t + 1 == opts.lsvm_max_iter) {
      double obj_avg = hinge_objective(X, y, c, avg_w, avg_b);
      double obj_raw = hinge_objective(X, y, c, w, b);
      if (obj_avg < best_obj) {
        best_obj = obj_avg;
        best_w = avg_w;
        best_b = avg_b;
      }
      if (obj_raw < best_obj) {
        best_obj = obj_raw;
        best_w = w;
        best_b = b;
      }
      double rel = std::abs(last_check_obj - best_obj) / std::max(1.0, std::abs(best_obj));
      if (t > 1024 && rel <= opts.lsvm_obj_tol) break;
      last_check_obj = best_obj;
    }
  }

  LinearModel m;
  m.weights = best_w;
  m.bias = best_b;
  m.objective = LinearModel::Objective::kHinge;
  m.c_value = c;
  m.final_objective = best_obj;
  return m;
}

namespace {

// Kernel rows served from a bounded cache; the full matrix is materialized
// when it fits in the budget. Returned maps stay valid while at most two
// rows are held (the cache never evicts either of the two most recent).
class KernelCache {
 public:
  KernelCache(const Eigen::MatrixXd& X, double gamma, std::size_t cache_mb)
      : X_(X), gamma_(gamma), n_(X.rows()) {
    sq_norms_ = X.rowwise().squaredNorm();
    std::size_t full_bytes = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_) * 8;
    full_ = full_bytes <= cache_mb * (1ULL << 20);
    if (full_) {
      K_.resize(n_, n_);
      Eigen::MatrixXd cross = X_ * X_.transpose();
      for (Eigen::Index i = 0; i < n_; ++i)
        for (Eigen::Index j = 0; j < n_; ++j)
          K_(i, j) = std::exp(-gamma_ * (sq_norms_(i) + sq_norms_(j) - 2.0 * cross(i, j)));
    } else {
      max_rows_ = std::max<std::size_t>(2, cache_mb * (1ULL << 20) /
                                               (static_cast<std::size_t>(n_) * 8));
    }
  }

  Eigen::Map<const Eigen::VectorXd> row(Eigen::Index i) {
    if (full_) return {K_.data() + i * n_, n_};
    auto it = cache_.find(i);
    if (it == cache_.end()) {
      if (cache_.size() >= max_rows_) {
        Eigen::Index victim = lru_.front();
        lru_.pop_front();
        cache_.erase(victim);
      }
      Eigen::VectorXd r = (-(gamma_ * ((sq_norms_.array() + sq_norms_(i)) -
                                       2.0 * (X_ * X_.row(i).transpose()).array())))
                              .exp()
                              .matrix();
      it = cache_.emplace(i, std::move(r)).first;
      lru_.push_back(i);
    } else {
      touch(i);
    }
    return {it->second.data(), n_};
  }

 private:
  void touch(Eigen::Index i) {
    auto it = std::find(lru_.begin(), lru_.end(), i);
    if (it != lru_.end()) {
      lru_.erase(it);
      lru_.push_back(i);
    }
  }

  const Eigen::MatrixXd& X_;
  double gamma_;
  Eigen::Index n_;
  Eigen::VectorXd sq_norms_;
  bool full_ = false;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> K_;
  std::size_t max_rows_ = 0;
  std::unordered_map<Eigen::Index, Eigen::VectorXd> cache_;
  std::deque<Eigen::Index> lru_;
};

}  // namespace

KernelSvmModel train_rbf_svm(const Eigen::MatrixXd& X, const std::vector<int>& y, double c,
                             double gamma, const SolverOptions& opts) {
  check_xy(X, y);
  if (c <= 0.0 || gamma <= 0.0) throw std::invalid_argument("C and gamma must be positive");

  const Eigen::Index n = X.rows();
  Eigen::VectorXd s = signed_labels(y);
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  // decision values without bias: f_i = sum_j alpha_j y_j K_ij
  Eigen::VectorXd fx = Eigen::VectorXd::Zero(n);
  KernelCache cache(X, gamma, opts.svm_cache_mb);

  auto in_up = [&](Eigen::Index i) {
    return (s(i) > 0.0 && alpha(i) < c) || (s(i) < 0.0 && alpha(i) > 0.0);
  };
  auto in_low = [&](Eigen::Index i) {
    return (s(i) > 0.0 && alpha(i) > 0.0) || (s(i) < 0.0 && alpha(i) < c);
  };
  // optimality gaps g_i = y_i - f_i; need max_up g <= min_low g + tol
  auto gap = [&](Eigen::Index i) { return s(i) - fx(i); };

  const double tol = opts.svm_tol;
  double violation = std::numeric_limits<double>::infinity();

  // Optimizes the (i,j) pair; returns false when the pair cannot move.
  auto take_step = [&](Eigen::Index i, Eigen::Index j) {
    if (i == j) return false;
    const double yi = s(i), yj = s(j);
    const double ai_old = alpha(i), aj_old = alpha(j);
    double L, H;
    if (yi != yj) {
      L = std::max(0.0, aj_old - ai_old);
      H = std::min(c, c + aj_old - ai_old);
    } else {
      L = std::max(0.0, ai_old + aj_old - c);
      H = std::min(c, ai_old + aj_old);
    }
    if (L >= H) return false;

    auto Ki = cache.row(i);
    auto Kj = cache.row(j);  // both stay valid: the cache holds >= 2 rows
    const double kii = Ki(i), kij = Ki(j), kjj = Kj(j);
    double quad = kii + kjj - 2.0 * kij;
    if (quad <= 0.0) quad = 1e-12;

    // E_i = f_i - y_i
    const double ei = fx(i) - yi, ej = fx(j) - yj;
    double aj = aj_old + yj * (ei - ej) / quad;
    aj = std::clamp(aj, L, H);
    if (std::abs(aj - aj_old) < 1e-14 * (aj + aj_old + 1e-14)) return false;
    // ai follows from sum(alpha*y) conservation; clamp only absorbs rounding
    double ai = std::clamp(ai_old + yi * yj * (aj_old - aj), 0.0, c);

    fx += yi * (ai - ai_old) * Ki + yj * (aj - aj_old) * Kj;
    alpha(i) = ai;
    alpha(j) = aj;
    return true;
  };

  std::size_t iter = 0;
  for (; iter < opts.svm_max_iter; ++iter) {
    // maximal violating pair
    Eigen::Index i_up = -1, j_low = -1;
    double g_max = -std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (in_up(i) && gap(i) > g_max) {
        g_max = gap(i);
        i_up = i;
      }
      if (in_low(i) && gap(i) < g_min) {
        g_min = gap(i);
        j_low = i;
      }
    }
    violation = g_max - g_min;
    if (i_up < 0 || j_low < 0 || violation <= tol) break;

    if (!take_step(i_up, j_low)) {
      // blocked pair: try the most violating i against every usable j
      bool progressed = false;
      for (Eigen::Index j = 0; j < n && !progressed; ++j)
        if (in_low(j)) progressed = take_step(i_up, j);
      for (Eigen::Index i = 0; i < n && !progressed; ++i)
        if (in_up(i)) progressed = take_step(i, j_low);
      if (!progressed) break;  // numerically stuck; report achieved violation
    }
  }

  // bias: midpoint of the feasible interval
  double g_max = -std::numeric_limits<double>::infinity();
  double g_min = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (in_up(i)) g_max = std::max(g_max, gap(i));
    if (in_low(i)) g_min = std::min(g_min, gap(i));
  }
  double bias = 0.0;
  if (std::isfinite(g_max) && std::isfinite(g_min)) bias = 0.5 * (g_max + g_min);
  else if (std::isfinite(g_max)) bias = g_max;
  else if (std::isfinite(g_min)) bias = g_min;

  KernelSvmModel model;
  model.gamma = gamma;
  model.c_value = c;
  model.bias = bias;
  model.kkt_violation = std::isfinite(violation) ? violation : 0.0;
  model.alpha_dot_y = alpha.dot(s);

  std::vector<Eigen::Index> sv;
  for (Eigen::Index i = 0; i < n; ++i)
    if (alpha(i) > 0.0) sv.push_back(i);
  model.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), X.cols());
  model.dual_coef.resize(static_cast<Eigen::Index>(sv.size()));
  for (std::size_t k = 0; k < sv.size(); ++k) {
    model.support_vectors.row(static_cast<Eigen::Index>(k)) = X.row(sv[k]);
    model.dual_coef(static_cast<Eigen::Index>(k)) = alpha(sv[k]) * s(sv[k]);
  }
  return model;
}

Eigen::VectorXd decision_scores(const NbModel& m, const Eigen::MatrixXd& X) {
  if (X.cols() != m.log_prob_pos.size()) throw std::invalid_argument("feature count mismatch");
  Eigen::VectorXd pos = (X * m.log_prob_pos).array() + m.log_prior_pos;
  Eigen::VectorXd neg = (X * m.log_prob_neg).array() + m.log_prior_neg;
  return pos - neg;
}

Eigen::VectorXd decision_scores(const LinearModel& m, const Eigen::MatrixXd& X) {
  if (X.cols() != m.weights.size()) throw std::invalid_argument("feature count mismatch");
  return ((X * m.weights).array() + m.bias).matrix();
}

Eigen::VectorXd decision_scores(const KernelSvmModel& m, const Eigen::MatrixXd& X) {
  if (X.cols() != m.support_vectors.cols()) throw std::invalid_argument("feature count mismatch");
  Eigen::VectorXd out(X.rows());
  Eigen::VectorXd sv_sq = m.support_vectors.rowwise().squaredNorm();
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    Eigen::VectorXd cross = m.support_vectors * X.row(i).transpose();
    double xx = X.row(i).squaredNorm();
    double acc = 0.0;
    for (Eigen::Index k = 0; k < m.dual_coef.size(); ++k)
      acc += m.dual_coef(k) * std::exp(-m.gamma * (sv_sq(k) + xx - 2.0 * cross(k)));
    out(i) = acc + m.bias;
  }
  return out;
}

Eigen::VectorXd decision_scores(const AnyModel& m, const Eigen::MatrixXd& X) {
  return std::visit([&](const auto& model) { return decision_scores(model, X); }, m);
}

std::vector<int> predict(const AnyModel& m, const Eigen::MatrixXd& X) {
  Eigen::VectorXd scores = decision_scores(m, X);
  std::vector<int> labels(static_cast<std::size_t>(scores.size()));
  for (Eigen::Index i = 0; i < scores.size(); ++i)
    labels[static_cast<std::size_t>(i)] = scores(i) > 0.0 ? 1 : 0;
  return labels;
}

GridSearchResult grid_search_cv(const Eigen::MatrixXd& X, const std::vector<int>& y,
                                ModelFamily family, const ParamGrid& grid, std::size_t folds,
                                std::uint64_t seed, const SolverOptions& opts) {
  check_xy(X, y);
  if (static_cast<std::size_t>(X.rows()) < folds)
    throw std::invalid_argument("fewer rows than folds");

  std::size_t effective_k = folds;
  auto fold_sets = stratified_kfold(y, folds, seed, &effective_k);

  auto train_cell = [&](double c, double gamma, const Eigen::MatrixXd& Xtr,
                        const std::vector<int>& ytr) -> AnyModel {
    switch (family) {
      case ModelFamily::kNaiveBayes: return train_multinomial_nb(Xtr, ytr);
      case ModelFamily::kLogReg: return train_logreg(Xtr, ytr, c, opts);
      case ModelFamily::kLinearSvm: return train_linear_svm(Xtr, ytr, c, opts);
      case ModelFamily::kRbfSvm: return train_rbf_svm(Xtr, ytr, c, gamma, opts);
    }
    throw std::logic_error("unreachable");
  };

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<double, double>> cells_params;
  if (family == ModelFamily::kNaiveBayes) {
    cells_params.emplace_back(nan, nan);  // no tuned parameter
  } else if (family == ModelFamily::kRbfSvm) {
    for (double c : grid.c_values)
      for (double g : grid.gamma_values) cells_params.emplace_back(c, g);
  } else {
    for (double c : grid.c_values) cells_params.emplace_back(c, nan);
  }
  if (cells_params.empty()) throw std::invalid_argument("empty parameter grid");

  GridSearchResult result;
  result.folds_used = effective_k;
  result.best_mean_f1 = -1.0;

  for (const auto& [c, g] : cells_params) {
    GridCell cell;
    cell.c_value = c;
    cell.gamma = g;
    for (std::size_t fold = 0; fold < fold_sets.size(); ++fold) {
      const auto& val_idx = fold_sets[fold];
      std::vector<char> in_val(y.size(), 0);
      for (auto i : val_idx) in_val[i] = 1;

      Eigen::MatrixXd Xtr(X.rows() - static_cast<Eigen::Index>(val_idx.size()), X.cols());
      Eigen::MatrixXd Xval(static_cast<Eigen::Index>(val_idx.size()), X.cols());
      std::vector<int> ytr, yval;
      Eigen::Index tr = 0, va = 0;
      for (Eigen::Index i = 0; i < X.rows(); ++i) {
        if (in_val[static_cast<std::size_t>(i)]) {
          Xval.row(va++) = X.row(i);
          yval.push_back(y[static_cast<std::size_t>(i)]);
        } else {
          Xtr.row(tr++) = X.row(i);
          ytr.push_back(y[static_cast<std::size_t>(i)]);
        }
      }
      AnyModel model = train_cell(c, g, Xtr, ytr);
      std::vector<int> pred = predict(model, Xval);
      cell.fold_f1.push_back(prf1(yval, pred).f1);
      cell.fold_predictions.push_back(std::move(pred));
      cell.fold_truths.push_back(std::move(yval));
    }
    cell.mean_f1 = mean(cell.fold_f1);
    result.cells.push_back(std::move(cell));
  }

  // best by mean F1; grid order (C asc, gamma asc) makes strict '>' pick the
  // smallest parameters on ties
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    if (result.cells[i].mean_f1 > result.best_mean_f1) {
      result.best_mean_f1 = result.cells[i].mean_f1;
      result.best_cell = i;
    }
  }
  result.best_c = result.cells[result.best_cell].c_value;
  result.best_gamma = result.cells[result.best_cell].gamma;
  result.refit = train_cell(result.best_c, result.best_gamma, X, y);
  return result;
}

void save_model(const AnyModel& m, const std::string& path) {
  Checkpoint ckpt;
  if (const auto* nb = std::get_if<NbModel>(&m)) {
    ckpt.kind = "nb_model";
    ckpt.scalars["log_prior_neg"] = nb->log_prior_neg;
    ckpt.scalars["log_prior_pos"] = nb->log_prior_pos;
    ckpt.scalars["alpha"] = nb->alpha;
    ckpt.tensors["log_prob_neg"] = nb->log_prob_neg;
    ckpt.tensors["log_prob_pos"] = nb->log_prob_pos;
  } else if (const auto* lin = std::get_if<LinearModel>(&m)) {
    ckpt.kind = "linear_model";
    ckpt.scalars["bias"] = lin->bias;
    ckpt.scalars["hinge"] = lin->objective == LinearModel::Objective::kHinge ? 1.0 : 0.0;
    ckpt.scalars["c_value"] = lin->c_value;
    ckpt.tensors["weights"] = lin->weights;
  } else {
    const auto& svm = std::get<KernelSvmModel>(m);
    ckpt.kind = "rbf_svm_model";
    ckpt.scalars["bias"] = svm.bias;
    ckpt.scalars["gamma"] = svm.gamma;
    ckpt.scalars["c_value"] = svm.c_value;
    ckpt.tensors["support_vectors"] = svm.support_vectors;
    ckpt.tensors["dual_coef"] = svm.dual_coef;
  }
  ckpt.save(path);
}

AnyModel load_model(const std::string& path) {
  Checkpoint ckpt = Checkpoint::load(path);
  if (ckpt.kind == "nb_model") {
    NbModel m;
    m.log_prior_neg = ckpt.scalar("log_prior_neg");
    m.log_prior_pos = ckpt.scalar("log_prior_pos");
    m.alpha = ckpt.scalar("alpha");
    m.log_prob_neg = ckpt.tensor("log_prob_neg");
    m.log_prob_pos = ckpt.tensor("log_prob_pos");
    return m;
  }
  if (ckpt.kind == "linear_model") {
    LinearModel m;
    m.bias = ckpt.scalar("bias");
    m.objective = ckpt.scalar("hinge") != 0.0 ? LinearModel::Objective::kHinge
                                              : LinearModel::Objective::kLogReg;
    m.c_value = ckpt.scalar("c_value");
    m.weights = ckpt.tensor("weights");
    return m;
  }
  if (ckpt.kind == "rbf_svm_model") {
    KernelSvmModel m;
    m.bias = ckpt.scalar("bias");
    m.gamma = ckpt.scalar("gamma");
    m.c_value = ckpt.scalar("c_value");
    m.support_vectors = ckpt.tensor("support_vectors");
    m.dual_coef = ckpt.tensor("dual_coef");
    return m;
  }
  throw std::runtime_error(path + ": unknown model kind '" + ckpt.kind + "'");
}

}  // namespace depembed
