#include "tnvq/pca.hpp"

#include <fstream>
#include <sstream>

#include "doctest.h"
#include "tnvq/dataset.hpp"
#include "tnvq/rng.hpp"

#ifndef TNVQ_DATA_FILE
#define TNVQ_DATA_FILE "data/car.data"
#endif

using namespace tnvq;

TEST_CASE("collinear data concentrates all variance in one component") {
  Eigen::MatrixXd x(5, 2);
  for (int i = 0; i < 5; ++i) {
    x(i, 0) = i;
    x(i, 1) = 3.0 * i - 2.0;
  }
  PcaModel m = pca_fit(x, 1);
  CHECK(m.ratios(0) == doctest::Approx(1.0).epsilon(1e-10));
  PcaModel full = pca_fit(x, 2);
  CHECK(full.ratios(0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(full.ratios(1) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("isotropic samples spread variance roughly evenly") {
  Rng rng(801);
  Eigen::MatrixXd x(4000, 2);
  for (int i = 0; i < x.rows(); ++i) {
    x(i, 0) = rng.normal();
    x(i, 1) = rng.normal();
  }
  PcaModel m = pca_fit(x, 2);
  CHECK(m.ratios(0) == doctest::Approx(0.5).epsilon(0.1));
  CHECK(m.ratios(1) == doctest::Approx(0.5).epsilon(0.1));
  CHECK(std::abs(m.ratios(0) - 0.5) < 0.05);
  CHECK(std::abs(m.ratios(1) - 0.5) < 0.05);
}

TEST_CASE("full-dimensional transform is invertible") {
  Rng rng(802);
  Eigen::MatrixXd x(40, 6);
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.cols(); ++j) x(i, j) = rng.normal() + j;
  }
  PcaModel m = pca_fit(x, 6);
  Eigen::MatrixXd t = pca_transform(m, x);
  Eigen::MatrixXd back =
      (t * m.components.transpose()).rowwise() + m.mean.transpose();
  CHECK((back - x).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("components are orthonormal and ratios are ordered") {
  Rng rng(803);
  Eigen::MatrixXd x(60, 8);
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.cols(); ++j) {
      x(i, j) = rng.normal() * (j + 1) + 0.3 * rng.normal();
    }
  }
  PcaModel m = pca_fit(x, 5);
  Eigen::MatrixXd gram = m.components.transpose() * m.components;
  CHECK((gram - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-10);
  for (int j = 0; j + 1 < 5; ++j) CHECK(m.ratios(j) >= m.ratios(j + 1));
  for (int j = 0; j < 5; ++j) {
    CHECK(m.ratios(j) >= 0.0);
    CHECK(m.ratios(j) <= 1.0);
  }
  // Sign convention: the largest-magnitude entry of each column is positive.
  for (int j = 0; j < 5; ++j) {
    int imax = 0;
    m.components.col(j).cwiseAbs().maxCoeff(&imax);
    CHECK(m.components(imax, j) > 0.0);
  }
}

TEST_CASE("transforming the mean row gives zero") {
  Rng rng(804);
  Eigen::MatrixXd x(30, 4);
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.cols(); ++j) x(i, j) = rng.uniform(-2, 5);
  }
  PcaModel m = pca_fit(x, 3);
  Eigen::MatrixXd mean_row = m.mean.transpose();
  Eigen::MatrixXd t = pca_transform(m, mean_row);
  CHECK(t.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("transformed data has diagonal covariance") {
  Rng rng(805);
  Eigen::MatrixXd x(200, 5);
  for (int i = 0; i < x.rows(); ++i) {
    double base = rng.normal();
    for (int j = 0; j < x.cols(); ++j) x(i, j) = base + 0.5 * rng.normal() * (j + 1);
  }
  PcaModel m = pca_fit(x, 5);
  Eigen::MatrixXd t = pca_transform(m, x);
  Eigen::MatrixXd centered = t.rowwise() - t.colwise().mean();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / double(t.rows() - 1);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      if (i != j) CHECK(std::abs(cov(i, j)) <= 1e-8 * (1.0 + cov.norm()));
    }
  }
}

TEST_CASE("degenerate inputs are rejected") {
  Eigen::MatrixXd x(5, 3);
  x.setRandom();
  CHECK_THROWS_AS(pca_fit(x, 4), std::invalid_argument);
  CHECK_THROWS_AS(pca_fit(x, 0), std::invalid_argument);
  Eigen::MatrixXd one(1, 3);
  one.setZero();
  CHECK_THROWS_AS(pca_fit(one, 1), std::invalid_argument);
  PcaModel m = pca_fit(x, 2);
  Eigen::MatrixXd wrong(4, 2);
  wrong.setZero();
  CHECK_THROWS_AS(pca_transform(m, wrong), std::invalid_argument);
}

TEST_CASE("scree of the bundled dataset is a proper distribution") {
  std::ifstream in(TNVQ_DATA_FILE);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  LabeledDataset ds = one_hot(parse_car_csv(ss.str()));
  PcaModel m = pca_fit(ds.features, 20);
  auto rows = scree(m);
  REQUIRE(rows.size() == 20);
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].first == static_cast<int>(i));
    if (i > 0) CHECK(rows[i].second <= rows[i - 1].second + 1e-15);
  }
  double sum = 0.0;
  for (auto& [idx, ratio] : rows) sum += ratio;
  CHECK(sum <= 1.0 + 1e-10);
  CHECK(sum > 0.9);  // one-hot car data: 20 of 21 directions carry nearly all variance

  PcaModel full = pca_fit(ds.features, 21);
  double total = 0.0;
  for (auto& [idx, ratio] : scree(full)) total += ratio;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}
