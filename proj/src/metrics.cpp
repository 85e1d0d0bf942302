#include "depembed/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace depembed {

Prf1 prf1(const std::vector<int>& y_true, const std::vector<int>& y_pred, int positive) {
  if (y_true.size() != y_pred.size()) throw std::invalid_argument("label vector lengths differ");
  if (y_true.empty()) throw std::invalid_argument("empty label vectors");

  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    bool t = y_true[i] == positive;
    bool p = y_pred[i] == positive;
    if (t && p) ++tp;
    else if (!t && p) ++fp;
    else if (t && !p) ++fn;
  }

  Prf1 out;
  out.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  out.recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  out.f1 = (out.precision + out.recall) > 0.0
               ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
               : 0.0;
  return out;
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double m = mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

}  // namespace depembed
