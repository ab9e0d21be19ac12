#include "tnvq/metrics.hpp"

#include <stdexcept>

namespace tnvq {

namespace {

void check_lengths(const std::vector<int>& preds,
                   const std::vector<int>& labels) {
  if (preds.size() != labels.size()) {
    throw std::invalid_argument("prediction and label counts differ");
  }
  if (preds.empty()) throw std::invalid_argument("empty prediction list");
}

}  // namespace

double accuracy(const std::vector<int>& preds, const std::vector<int>& labels) {
  check_lengths(preds, labels);
  int hits = 0;
  for (size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] == labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

double f1_score(const std::vector<int>& preds, const std::vector<int>& labels,
                int positive) {
  check_lengths(preds, labels);
  long tp = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < preds.size(); ++i) {
    const bool p = preds[i] == positive;
    const bool l = labels[i] == positive;
    if (p && l) ++tp;
    else if (p && !l) ++fp;
    else if (!p && l) ++fn;
  }
  const double denom = 2.0 * tp + fp + fn;  // == precision+recall scaled
  if (denom == 0.0) return 0.0;
  return 2.0 * tp / denom;
}

}  // namespace tnvq
