#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "tnvq/metrics.hpp"

using tnvq::accuracy;
using tnvq::f1_score;

TEST_CASE("accuracy: all correct is 1") {
  std::vector<int> p = {1, -1, 1, -1};
  CHECK(accuracy(p, p) == doctest::Approx(1.0));
}

TEST_CASE("accuracy: two of three") {
  std::vector<int> preds = {+1, -1, +1};
  std::vector<int> labels = {+1, +1, +1};
  CHECK(accuracy(preds, labels) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("accuracy: all wrong is 0") {
  std::vector<int> preds = {+1, +1};
  std::vector<int> labels = {-1, -1};
  CHECK(accuracy(preds, labels) == doctest::Approx(0.0));
}

TEST_CASE("accuracy: length mismatch throws") {
  std::vector<int> preds = {+1, +1};
  std::vector<int> labels = {-1};
  CHECK_THROWS_AS(accuracy(preds, labels), std::invalid_argument);
  CHECK_THROWS_AS(accuracy({}, {}), std::invalid_argument);
}

TEST_CASE("f1: perfect predictions with at least one positive") {
  std::vector<int> p = {+1, -1, +1, +1, -1};
  CHECK(f1_score(p, p) == doctest::Approx(1.0));
}

TEST_CASE("f1: no positive predictions gives 0") {
  std::vector<int> preds = {-1, -1, -1};
  std::vector<int> labels = {+1, -1, +1};
  CHECK(f1_score(preds, labels) == doctest::Approx(0.0));
}

TEST_CASE("f1: no positives anywhere gives 0") {
  std::vector<int> preds = {-1, -1};
  std::vector<int> labels = {-1, -1};
  CHECK(f1_score(preds, labels) == doctest::Approx(0.0));
}

TEST_CASE("f1: one tp, one fp, one fn") {
  // tp=1 (pos/pos), fp=1 (pos/neg), fn=1 (neg/pos), tn=1.
  // precision = 1/2, recall = 1/2, f1 = 1/2.
  std::vector<int> preds = {+1, +1, -1, -1};
  std::vector<int> labels = {+1, -1, +1, -1};
  CHECK(f1_score(preds, labels) == doctest::Approx(0.5));
  CHECK(accuracy(preds, labels) == doctest::Approx(0.5));
}

TEST_CASE("f1: asymmetric counts against hand computation") {
  // tp=2, fp=1, fn=3 -> precision 2/3, recall 2/5,
  // f1 = 2*(2/3)*(2/5)/((2/3)+(2/5)) = 1/2.
  std::vector<int> preds = {+1, +1, +1, -1, -1, -1, -1, -1};
  std::vector<int> labels = {+1, +1, -1, +1, +1, +1, -1, -1};
  CHECK(f1_score(preds, labels) == doctest::Approx(0.5));
}

TEST_CASE("f1: respects the chosen positive class") {
  std::vector<int> preds = {+1, +1, -1, -1};
  std::vector<int> labels = {+1, -1, +1, -1};
  // Swapping the positive class mirrors the confusion matrix; here both
  // directions happen to give 1/2, so use an asymmetric example too.
  CHECK(f1_score(preds, labels, -1) == doctest::Approx(0.5));

  std::vector<int> preds2 = {+1, +1, +1, -1};
  std::vector<int> labels2 = {+1, +1, -1, -1};
  // positive=+1: tp=2, fp=1, fn=0 -> f1 = 4/5.
  CHECK(f1_score(preds2, labels2, +1) == doctest::Approx(0.8));
  // positive=-1: tp=1, fp=0, fn=1 -> f1 = 2/3.
  CHECK(f1_score(preds2, labels2, -1) == doctest::Approx(2.0 / 3.0));
}
