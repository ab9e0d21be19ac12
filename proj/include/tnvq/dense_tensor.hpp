#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace tnvq {

// Dense d-way tensor, row-major (last index fastest).
struct DenseTensor {
  std::vector<int> shape;
  std::vector<double> data;

  DenseTensor() = default;

  explicit DenseTensor(std::vector<int> s) : shape(std::move(s)) {
    data.assign(size_from_shape(shape), 0.0);
  }

  static std::size_t size_from_shape(const std::vector<int>& s) {
    if (s.empty()) throw std::invalid_argument("tensor order must be >= 1");
    std::size_t n = 1;
    for (int dim : s) {
      if (dim < 1) throw std::invalid_argument("mode dimension must be >= 1");
      n *= static_cast<std::size_t>(dim);
    }
    return n;
  }

  int order() const { return static_cast<int>(shape.size()); }
  std::size_t size() const { return data.size(); }

  std::size_t linear_index(const std::vector<int>& idx) const {
    std::size_t li = 0;
    for (int k = 0; k < order(); ++k) li = li * shape[k] + idx[k];
    return li;
  }

  double& at(const std::vector<int>& idx) { return data[linear_index(idx)]; }
  double at(const std::vector<int>& idx) const { return data[linear_index(idx)]; }
};

}  // namespace tnvq
