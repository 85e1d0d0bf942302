#include "depembed/pca.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace depembed {

PcaModel pca_fit(const Eigen::MatrixXd& vectors, Eigen::Index q) {
  const Eigen::Index n = vectors.rows();
  const Eigen::Index d = vectors.cols();
  if (q < 1) throw std::invalid_argument("component count must be >= 1");
  if (q > d) throw std::invalid_argument("component count exceeds dimensionality");
  if (n < q + 1) throw std::invalid_argument("need at least q+1 vectors");

  PcaModel model;
  model.mean = vectors.colwise().mean();
  Eigen::MatrixXd centered = vectors.rowwise() - model.mean.transpose();
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  // eigenvalues come out ascending
  Eigen::VectorXd evals = solver.eigenvalues().cwiseMax(0.0);
  double total = evals.sum();

  model.axes.resize(q, d);
  model.explained_variance_ratio.resize(q);
  for (Eigen::Index k = 0; k < q; ++k) {
    Eigen::VectorXd axis = solver.eigenvectors().col(d - 1 - k);
    // orient: largest-magnitude component positive
    Eigen::Index imax = 0;
    axis.cwiseAbs().maxCoeff(&imax);
    if (axis(imax) < 0.0) axis = -axis;
    model.axes.row(k) = axis.transpose();
    model.explained_variance_ratio(k) = total > 0.0 ? evals(d - 1 - k) / total : 0.0;
  }
  return model;
}

Eigen::MatrixXd pca_project(const PcaModel& model, const Eigen::MatrixXd& vectors) {
  if (vectors.cols() != model.mean.size()) throw std::invalid_argument("dimension mismatch");
  return (vectors.rowwise() - model.mean.transpose()) * model.axes.transpose();
}

Eigen::MatrixXd pca_reconstruct(const PcaModel& model, const Eigen::MatrixXd& projected) {
  if (projected.cols() != model.axes.rows()) throw std::invalid_argument("dimension mismatch");
  return (projected * model.axes).rowwise() + model.mean.transpose();
}

double silhouette_score(const Eigen::MatrixXd& points, const std::vector<int>& cluster_of) {
  const Eigen::Index n = points.rows();
  if (static_cast<std::size_t>(n) != cluster_of.size())
    throw std::invalid_argument("point and label counts differ");
  std::set<int> clusters(cluster_of.begin(), cluster_of.end());
  if (clusters.size() < 2) throw std::invalid_argument("silhouette needs at least two clusters");

  Eigen::MatrixXd dist(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      dist(i, j) = (points.row(i) - points.row(j)).norm();

  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    std::map<int, std::pair<double, std::size_t>> sums;  // cluster -> (dist sum, count)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      auto& [sum, count] = sums[cluster_of[static_cast<std::size_t>(j)]];
      sum += dist(i, j);
      ++count;
    }
    const int own = cluster_of[static_cast<std::size_t>(i)];
    auto own_it = sums.find(own);
    if (own_it == sums.end() || own_it->second.second == 0) continue;  // singleton: s = 0
    double a = own_it->second.first / static_cast<double>(own_it->second.second);
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [cl, sc] : sums) {
      if (cl == own) continue;
      b = std::min(b, sc.first / static_cast<double>(sc.second));
    }
    double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

ProjectionResult project_wordlists(
    const Embedding& emb,
    const std::vector<std::pair<std::string, std::vector<std::string>>>& lists) {
  ProjectionResult result;

  std::vector<std::string> present;  // distinct, first-seen order
  std::set<std::string> seen;
  for (const auto& [name, words] : lists) {
    for (const auto& w : words) {
      if (!emb.contains(w)) {
        result.missing_words.push_back(w);
        continue;
      }
      if (seen.insert(w).second) present.push_back(w);
    }
  }
  if (present.size() < 3) throw std::invalid_argument("fewer than 3 listed words are present");

  Eigen::MatrixXd X(static_cast<Eigen::Index>(present.size()),
                    static_cast<Eigen::Index>(emb.dim()));
  std::map<std::string, Eigen::Index> row_of;
  for (std::size_t i = 0; i < present.size(); ++i) {
    auto r = *emb.vector(present[i]);
    for (std::size_t d = 0; d < r.size(); ++d)
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = r[d];
    row_of[present[i]] = static_cast<Eigen::Index>(i);
  }

  result.pca = pca_fit(X, 2);
  Eigen::MatrixXd coords = pca_project(result.pca, X);

  std::vector<int> cluster_of;
  std::vector<Eigen::Index> record_rows;
  int list_id = 0;
  for (const auto& [name, words] : lists) {
    for (const auto& w : words) {
      auto it = row_of.find(w);
      if (it == row_of.end()) continue;
      WordProjection rec;
      rec.word = w;
      rec.list_name = name;
      rec.x = coords(it->second, 0);
      rec.y = coords(it->second, 1);
      result.records.push_back(std::move(rec));
      cluster_of.push_back(list_id);
      record_rows.push_back(it->second);
    }
    ++list_id;
  }

  std::set<int> distinct(cluster_of.begin(), cluster_of.end());
  if (distinct.size() >= 2) {
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(record_rows.size()), 2);
    for (std::size_t i = 0; i < record_rows.size(); ++i)
      pts.row(static_cast<Eigen::Index>(i)) = coords.row(record_rows[i]);
    result.silhouette = silhouette_score(pts, cluster_of);
  } else {
    result.silhouette = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

std::string projection_to_text(const ProjectionResult& result) {
  std::ostringstream os;
  os << "# records=" << result.records.size() << " missing=" << result.missing_words.size();
  if (!std::isnan(result.silhouette)) os << " silhouette=" << result.silhouette;
  os << "\n";
  os << "# explained_variance_ratio=" << result.pca.explained_variance_ratio(0) << ","
     << result.pca.explained_variance_ratio(1) << "\n";
  for (const auto& rec : result.records)
    os << rec.word << '\t' << rec.list_name << '\t' << rec.x << '\t' << rec.y << "\n";
  return os.str();
}

}  // namespace depembed
