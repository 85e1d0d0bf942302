#include "depembed/splits.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace depembed {

namespace {

// label -> shuffled member indices
std::map<int, std::vector<std::size_t>> shuffled_by_class(const std::vector<int>& labels,
                                                          std::uint64_t seed) {
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  std::mt19937 rng(static_cast<std::uint32_t>(seed));
  for (auto& [label, members] : by_class) std::shuffle(members.begin(), members.end(), rng);
  return by_class;
}

}  // namespace

SplitIndices stratified_split(const std::vector<int>& labels, double train_frac,
                              std::uint64_t seed) {
  if (labels.empty()) throw std::invalid_argument("empty dataset");
  if (!(train_frac > 0.0 && train_frac < 1.0))
    throw std::invalid_argument("train fraction must be in (0,1)");

  auto by_class = shuffled_by_class(labels, seed);
  for (const auto& [label, members] : by_class)
    if (members.size() < 2)
      throw std::invalid_argument("class " + std::to_string(label) + " has fewer than 2 samples");
  if (by_class.size() < 2) throw std::invalid_argument("need samples from both classes");

  const long long total_train =
      std::llround(train_frac * static_cast<double>(labels.size()));

  struct ClassPlan {
    int label;
    std::size_t take;
    double remainder;
  };
  std::vector<ClassPlan> plan;
  long long assigned = 0;
  for (const auto& [label, members] : by_class) {
    double exact = train_frac * static_cast<double>(members.size());
    std::size_t take = static_cast<std::size_t>(std::floor(exact));
    plan.push_back({label, take, exact - std::floor(exact)});
    assigned += static_cast<long long>(take);
  }
  long long leftover = total_train - assigned;
  std::sort(plan.begin(), plan.end(), [](const ClassPlan& a, const ClassPlan& b) {
    if (a.remainder != b.remainder) return a.remainder > b.remainder;
    return a.label < b.label;
  });
  for (auto& p : plan) {
    if (leftover <= 0) break;
    if (p.take < by_class[p.label].size()) {
      ++p.take;
      --leftover;
    }
  }

  SplitIndices out;
  for (const auto& p : plan) {
    const auto& members = by_class[p.label];
    for (std::size_t i = 0; i < members.size(); ++i)
      (i < p.take ? out.train : out.test).push_back(members[i]);
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::vector<std::vector<std::size_t>> stratified_kfold(const std::vector<int>& labels,
                                                       std::size_t k, std::uint64_t seed,
                                                       std::size_t* effective_k) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (labels.empty()) throw std::invalid_argument("empty dataset");

  auto by_class = shuffled_by_class(labels, seed);
  std::size_t min_class = labels.size();
  for (const auto& [label, members] : by_class) min_class = std::min(min_class, members.size());
  if (min_class < k) {
    std::cerr << "warning: reducing folds from " << k << " to " << min_class
              << " (smallest class size)\n";
    k = min_class;
    if (k < 2) throw std::invalid_argument("smallest class too small for cross-validation");
  }
  if (effective_k != nullptr) *effective_k = k;

  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t offset = 0;  // rotate the dealing start per class to balance fold sizes
  for (const auto& [label, members] : by_class) {
    for (std::size_t i = 0; i < members.size(); ++i)
      folds[(offset + i) % k].push_back(members[i]);
    offset = (offset + members.size()) % k;
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

}  // namespace depembed
