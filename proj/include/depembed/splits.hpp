#pragma once

#include <cstdint>
#include <vector>

namespace depembed {

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Stratified 70/30-style split. Per-class train counts use floor plus
// largest-remainder rounding against a total of round(n * train_frac);
// remainder ties go to the smaller label. Throws when any class has fewer
// than two samples.
SplitIndices stratified_split(const std::vector<int>& labels, double train_frac,
                              std::uint64_t seed);

// Stratified k folds over the given labels: disjoint, exhaustive, per-fold
// class proportion within one sample of the overall. When the smaller class
// has fewer than k members, k is reduced (reported via effective_k) with a
// warning on stderr. k must be at least 2.
std::vector<std::vector<std::size_t>> stratified_kfold(const std::vector<int>& labels,
                                                       std::size_t k, std::uint64_t seed,
                                                       std::size_t* effective_k = nullptr);

}  // namespace depembed
