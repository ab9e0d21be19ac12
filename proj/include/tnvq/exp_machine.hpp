#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tnvq/dataset.hpp"
#include "tnvq/tt_tensor.hpp"

namespace tnvq::tn {

enum class LossKind { kLogistic, kMse };

// Linear model over all 2^d multiplicative feature interactions; the weight
// tensor lives on the fixed-rank tensor-train manifold.
struct TnModel {
  TtTensor weights;  // d modes, each of size 2
  LossKind loss_kind = LossKind::kLogistic;
  double lambda = 0.0;
  bool squared_reg = false;          // (lambda/2)*||W||^2 instead of ||W||
  std::vector<double> loss_history;  // one entry per training epoch

  int num_features() const { return weights.order(); }
};

struct TnTrainConfig {
  int rank = 4;
  int epochs = 500;
  double alpha = 0.2;  // learning rate for full-batch manifold steps
  double lambda = 0.0;
  std::uint64_t seed = 1;
  LossKind loss_kind = LossKind::kLogistic;
  bool squared_reg = false;
};

// Rank-1 train whose entry at multi-index (i_1..i_d) is prod_k x_k^{i_k}.
TtTensor encode_features(const std::vector<double>& x);

double predict_raw(const TnModel& m, const std::vector<double>& x);
int classify(const TnModel& m, const std::vector<double>& x);  // ties -> +1

double loss(const TnModel& m, const LabeledDataset& batch);
TtTensor euclidean_gradient(const TnModel& m, const LabeledDataset& batch);

using TnEpochObserver = std::function<void(int epoch, const TnModel&)>;
TnModel fit(const LabeledDataset& train, const TnTrainConfig& cfg,
            const TnEpochObserver& on_epoch = {});

long long count_params(int d, int r);  // 2*d*r^2
long long stored_params(const TnModel& m);

// Versioned text round-trip: header (d, r, loss kind, lambda), then core
// entries with 17 significant digits. Requires the uniform clamped rank
// profile that fit() produces.
std::string serialize(const TnModel& m);
TnModel deserialize(const std::string& text);

// Interior rank profile used by fit: r_k = min(r, 2^k, 2^(d-k)).
std::vector<int> clamped_ranks(int d, int r);

}  // namespace tnvq::tn
