#pragma once

#include <vector>

namespace depembed {

struct Prf1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// P = TP/(TP+FP), R = TP/(TP+FN), F1 = 2PR/(P+R); each term is 0 when its
// denominator is 0. Throws on length mismatch or empty input.
Prf1 prf1(const std::vector<int>& y_true, const std::vector<int>& y_pred, int positive = 1);

double mean(const std::vector<double>& xs);
// Sample standard deviation (n-1); 0 when fewer than two values.
double sample_std(const std::vector<double>& xs);

}  // namespace depembed
