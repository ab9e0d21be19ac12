#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace tnvq {

struct PcaModel {
  Eigen::VectorXd mean;        // length d
  Eigen::MatrixXd components;  // d x k, orthonormal columns
  Eigen::VectorXd ratios;      // length k, non-increasing, in [0,1]
};

// Top-k principal directions of the sample covariance (denominator n-1).
// Component signs are fixed so each column's largest-magnitude entry is
// positive, making outputs reproducible across eigensolvers.
PcaModel pca_fit(const Eigen::MatrixXd& x, int k);

Eigen::MatrixXd pca_transform(const PcaModel& m, const Eigen::MatrixXd& x);

std::vector<std::pair<int, double>> scree(const PcaModel& m);

}  // namespace tnvq
