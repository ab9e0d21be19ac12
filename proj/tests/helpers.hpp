#pragma once

#include <vector>

#include "tnvq/dense_tensor.hpp"
#include "tnvq/rng.hpp"
#include "tnvq/tt_tensor.hpp"

namespace tnvq::testing {

inline DenseTensor random_dense(const std::vector<int>& shape, Rng& rng) {
  DenseTensor t(shape);
  for (double& v : t.data) v = rng.normal();
  return t;
}

// Random TT with the given interior ranks (clamped to feasible sizes).
inline TtTensor random_tt(const std::vector<int>& shape, int rank, Rng& rng) {
  const int d = static_cast<int>(shape.size());
  TtTensor t;
  long left_cap = 1;
  std::vector<int> r(d + 1, 1);
  for (int k = 1; k < d; ++k) {
    left_cap = std::min<long>(left_cap * shape[k - 1], 1 << 20);
    long right_cap = 1;
    for (int j = k; j < d; ++j) {
      right_cap *= shape[j];
      if (right_cap > (1 << 20)) break;
    }
    r[k] = static_cast<int>(std::min<long>({static_cast<long>(rank), left_cap, right_cap}));
  }
  for (int k = 0; k < d; ++k) {
    TtCore c(r[k], shape[k], r[k + 1]);
    for (double& v : c.a) v = rng.normal();
    t.cores.push_back(std::move(c));
  }
  return t;
}

inline double dense_dot(const DenseTensor& a, const DenseTensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
  return s;
}

inline double dense_norm(const DenseTensor& a) { return std::sqrt(dense_dot(a, a)); }

inline double dense_dist(const DenseTensor& a, const DenseTensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace tnvq::testing
