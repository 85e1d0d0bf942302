#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "depembed/embedding.hpp"

namespace depembed {

struct PcaModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd axes;                       // q x d, orthonormal rows
  Eigen::VectorXd explained_variance_ratio;   // nonincreasing, sums to <= 1
};

// Top-q principal axes from the eigendecomposition of the sample covariance.
// Each axis is oriented so its largest-magnitude component is positive.
// Throws when fewer than q+1 rows are supplied.
PcaModel pca_fit(const Eigen::MatrixXd& vectors, Eigen::Index q = 2);

Eigen::MatrixXd pca_project(const PcaModel& model, const Eigen::MatrixXd& vectors);
Eigen::MatrixXd pca_reconstruct(const PcaModel& model, const Eigen::MatrixXd& projected);

struct WordProjection {
  std::string word;
  std::string list_name;
  double x = 0.0;
  double y = 0.0;
};

struct ProjectionResult {
  std::vector<WordProjection> records;
  std::vector<std::string> missing_words;  // absent from the embedding; reported, not fatal
  double silhouette = 0.0;                 // mean silhouette of the 2-D coords by list label
  PcaModel pca;
};

// PCA is fitted on the union of words found in the embedding; each
// (word, list) pair becomes one projected record. Throws when fewer than
// three listed words are present.
ProjectionResult project_wordlists(
    const Embedding& emb,
    const std::vector<std::pair<std::string, std::vector<std::string>>>& lists);

// "word<TAB>label<TAB>x<TAB>y" rows under a '#' summary header.
std::string projection_to_text(const ProjectionResult& result);

// Mean silhouette with Euclidean distance; singleton clusters score 0.
double silhouette_score(const Eigen::MatrixXd& points, const std::vector<int>& cluster_of);

}  // namespace depembed
