#include "tnvq/pca.hpp"

#include <cmath>
#include <stdexcept>

namespace tnvq {

PcaModel pca_fit(const Eigen::MatrixXd& x, int k) {
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  if (n < 2) throw std::invalid_argument("need at least 2 samples");
  if (k < 1 || k > d) {
    throw std::invalid_argument("component count must lie in [1, dim]");
  }

  PcaModel m;
  m.mean = x.colwise().mean();
  Eigen::MatrixXd centered = x.rowwise() - m.mean.transpose();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / double(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed");
  }
  // Eigenvalues arrive ascending; walk them from the back.
  Eigen::VectorXd evals = es.eigenvalues().cwiseMax(0.0);
  const double total = std::max(evals.sum(), 1e-300);

  m.components.resize(d, k);
  m.ratios.resize(k);
  for (int j = 0; j < k; ++j) {
    const int src = d - 1 - j;
    Eigen::VectorXd col = es.eigenvectors().col(src);
    int imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    if (col(imax) < 0.0) col = -col;
    m.components.col(j) = col;
    m.ratios(j) = evals(src) / total;
  }
  return m;
}

Eigen::MatrixXd pca_transform(const PcaModel& m, const Eigen::MatrixXd& x) {
  if (x.cols() != m.mean.size()) {
    throw std::invalid_argument("input dimension does not match fitted model");
  }
  return (x.rowwise() - m.mean.transpose()) * m.components;
}

std::vector<std::pair<int, double>> scree(const PcaModel& m) {
  std::vector<std::pair<int, double>> out;
  for (int j = 0; j < m.ratios.size(); ++j) out.emplace_back(j, m.ratios(j));
  return out;
}

}  // namespace tnvq
