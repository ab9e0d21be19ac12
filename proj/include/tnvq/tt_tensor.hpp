#pragma once

#include <Eigen/Dense>

#include <vector>

#include "tnvq/dense_tensor.hpp"

namespace tnvq {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// One tensor-train core of shape (r_left, n, r_right), row-major.
struct TtCore {
  int r_left = 1;
  int n = 1;
  int r_right = 1;
  std::vector<double> a;

  TtCore() = default;
  TtCore(int rl, int n_, int rr)
      : r_left(rl), n(n_), r_right(rr),
        a(static_cast<std::size_t>(rl) * n_ * rr, 0.0) {}

  double& at(int i, int j, int k) {
    return a[(static_cast<std::size_t>(i) * n + j) * r_right + k];
  }
  double at(int i, int j, int k) const {
    return a[(static_cast<std::size_t>(i) * n + j) * r_right + k];
  }

  // Mode slice G(j): r_left x r_right matrix, rows strided by n*r_right.
  using SliceMap = Eigen::Map<const RowMat, 0, Eigen::OuterStride<>>;
  using SliceMapMut = Eigen::Map<RowMat, 0, Eigen::OuterStride<>>;
  SliceMap slice(int j) const {
    return SliceMap(a.data() + static_cast<std::size_t>(j) * r_right, r_left,
                    r_right, Eigen::OuterStride<>(static_cast<long>(n) * r_right));
  }
  SliceMapMut slice(int j) {
    return SliceMapMut(a.data() + static_cast<std::size_t>(j) * r_right, r_left,
                       r_right, Eigen::OuterStride<>(static_cast<long>(n) * r_right));
  }

  // Unfoldings are plain reinterpretations of the row-major buffer.
  Eigen::Map<const RowMat> left_unfold() const {
    return {a.data(), static_cast<long>(r_left) * n, r_right};
  }
  Eigen::Map<const RowMat> right_unfold() const {
    return {a.data(), r_left, static_cast<long>(n) * r_right};
  }
  Eigen::Map<RowMat> left_unfold() {
    return {a.data(), static_cast<long>(r_left) * n, r_right};
  }
  Eigen::Map<RowMat> right_unfold() {
    return {a.data(), r_left, static_cast<long>(n) * r_right};
  }
};

struct TtTensor {
  std::vector<TtCore> cores;

  int order() const { return static_cast<int>(cores.size()); }
  std::vector<int> shape() const;
  std::vector<int> ranks() const;  // r_0 .. r_d
  void validate() const;           // throws std::invalid_argument
};

enum class OrthDir { kLeft, kRight };

TtTensor tt_svd(const DenseTensor& t, int max_rank, double eps = 0.0);
DenseTensor tt_to_dense(const TtTensor& t);
double tt_inner(const TtTensor& a, const TtTensor& b);
TtTensor tt_round(const TtTensor& t, int target_rank);
TtTensor tt_add(const TtTensor& a, const TtTensor& b);
TtTensor tt_scale(const TtTensor& a, double c);
double frobenius_norm(const TtTensor& t);
TtTensor orthogonalize(const TtTensor& t, OrthDir direction);

}  // namespace tnvq
