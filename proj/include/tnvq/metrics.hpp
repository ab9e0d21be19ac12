#pragma once

#include <vector>

namespace tnvq {

double accuracy(const std::vector<int>& preds, const std::vector<int>& labels);

// Harmonic mean of precision and recall for the positive class;
// 0 when precision + recall is 0.
double f1_score(const std::vector<int>& preds, const std::vector<int>& labels,
                int positive = +1);

}  // namespace tnvq
