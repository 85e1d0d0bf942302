#pragma once

#include <Eigen/Core>
#include <map>
#include <string>

namespace depembed {

// Versioned binary container of named scalars and named float64 matrices.
// One format serves every trained artifact (mappers, meta-embedding models,
// classifier models); `kind` tags what the tensors mean.
struct Checkpoint {
  std::string kind;
  std::map<std::string, double> scalars;
  std::map<std::string, Eigen::MatrixXd> tensors;

  void save(const std::string& path) const;
  static Checkpoint load(const std::string& path);

  double scalar(const std::string& name) const;
  const Eigen::MatrixXd& tensor(const std::string& name) const;
  void require_kind(const std::string& expected) const;
};

}  // namespace depembed
