#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tnvq/dataset.hpp"
#include "tnvq/statevector.hpp"

namespace tnvq::vqc {

struct VqcParams {
  int n = 1;                  // qubits (= features)
  int l = 0;                  // entangling layers
  std::vector<double> angles;  // n*(2l+1): layer 0 [n], then [n]+[n] per layer
  double threshold = 0.5;
  std::vector<double> loss_history;  // one entry per training epoch

  int angle_count() const { return n * (2 * l + 1); }
};

enum class GradMode { kShift, kAdjoint, kAuto };

struct VqcTrainConfig {
  int layers = 1;
  int epochs = 60;
  int batch_size = 32;
  double lr0 = 0.1;
  double decay = 0.95;
  std::uint64_t seed = 1;
  double threshold = 0.5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  bool signed_output = false;  // compare 2P-1 against +-1 instead of P vs {0,1}
  GradMode grad = GradMode::kAuto;
};

// Product state with qubit k in cos(pi x_k / 2)|0> + sin(pi x_k / 2)|1>.
Statevector encode(const std::vector<double>& x);

// Layer 0: Ry on every qubit. Each layer 1..L: CNOT chain with odd controls
// (1->2, 3->4, ...), Ry on every qubit, CNOT chain with even controls
// (2->3, 4->5, ...), Ry on every qubit. No wraparound link.
Statevector apply_ansatz(const Statevector& s, const VqcParams& p);

double predict(const std::vector<double>& x, const VqcParams& p);
int classify(const std::vector<double>& x, const VqcParams& p,
             double threshold);
int classify(const std::vector<double>& x, const VqcParams& p);

double mse_loss(const LabeledDataset& batch, const VqcParams& p,
                bool signed_output = false);

// Exact gradient via the parameter-shift rule (two shifted circuit
// evaluations per angle per sample).
std::vector<double> gradient(const LabeledDataset& batch, const VqcParams& p,
                             bool signed_output = false);

// Same gradient computed by a batched reverse sweep over the circuit;
// O(gates) instead of O(gates * angles) evaluations.
std::vector<double> gradient_adjoint(const LabeledDataset& batch,
                                     const VqcParams& p,
                                     bool signed_output = false);

using VqcEpochObserver = std::function<void(int epoch, const VqcParams&)>;
VqcParams fit(const LabeledDataset& train, const VqcTrainConfig& cfg,
              const VqcEpochObserver& on_epoch = {});

long long count_params(int n, int l);  // n*(2l+1)
long long stored_params(const VqcParams& p);

// Versioned text round-trip: header (N, L, threshold), then angles with 17
// significant digits.
std::string serialize(const VqcParams& p);
VqcParams deserialize(const std::string& text);

}  // namespace tnvq::vqc
