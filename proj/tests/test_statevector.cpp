#include "tnvq/statevector.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "tnvq/rng.hpp"

using namespace tnvq;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
constexpr double kPi = std::numbers::pi;

namespace {

VectorXcd as_vec(const Statevector& s) {
  return Eigen::Map<const VectorXcd>(s.amp.data(),
                                     static_cast<long>(s.dim()));
}

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i) {
    for (long j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

MatrixXcd ry_matrix(double theta) {
  MatrixXcd m(2, 2);
  m << std::cos(theta / 2), -std::sin(theta / 2),  //
      std::sin(theta / 2), std::cos(theta / 2);
  return m;
}

// Full 2^n x 2^n operator for a gate on one qubit (qubit 1 = leftmost factor).
MatrixXcd lift_single(int n, int qubit, const MatrixXcd& g) {
  MatrixXcd out = MatrixXcd::Identity(1, 1);
  for (int q = 1; q <= n; ++q) {
    out = kron(out, q == qubit ? g : MatrixXcd::Identity(2, 2));
  }
  return out;
}

MatrixXcd matrix_of(int n, const std::function<void(Statevector&)>& op) {
  const long dim = 1L << n;
  MatrixXcd m(dim, dim);
  for (long col = 0; col < dim; ++col) {
    Statevector s = new_zero_state(n);
    s.amp.assign(s.dim(), {0.0, 0.0});
    s.amp[static_cast<std::size_t>(col)] = {1.0, 0.0};
    op(s);
    m.col(col) = as_vec(s);
  }
  return m;
}

}  // namespace

TEST_CASE("zero state is |00...0> and bad sizes are rejected") {
  for (int n : {1, 3, 24}) {
    Statevector s = new_zero_state(n);
    CHECK(s.dim() == (std::size_t{1} << n));
    CHECK(s.amp[0] == std::complex<double>{1.0, 0.0});
    double rest = 0.0;
    for (std::size_t i = 1; i < s.dim(); ++i) rest += std::norm(s.amp[i]);
    CHECK(rest == 0.0);
  }
  CHECK_THROWS_AS(new_zero_state(0), std::invalid_argument);
  CHECK_THROWS_AS(new_zero_state(25), std::invalid_argument);
  CHECK_THROWS_AS(new_zero_state(-3), std::invalid_argument);
}

TEST_CASE("single-qubit rotation matches the closed form") {
  Statevector s = new_zero_state(1);
  apply_ry(s, 1, kPi / 2);
  CHECK(s.amp[0].real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(s.amp[1].real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(s.amp[0].imag() == 0.0);
  CHECK(s.amp[1].imag() == 0.0);
}

TEST_CASE("qubit one is the most significant bit") {
  Statevector s = new_zero_state(2);
  apply_ry(s, 1, kPi);  // flips qubit 1: |00> -> |10>
  CHECK(std::abs(s.amp[0]) <= 1e-15);
  CHECK(std::abs(s.amp[1]) <= 1e-15);
  CHECK(std::abs(s.amp[2] - 1.0) <= 1e-15);
  CHECK(std::abs(s.amp[3]) <= 1e-15);

  Statevector t = new_zero_state(2);
  apply_ry(t, 2, kPi);  // flips qubit 2: |00> -> |01>
  CHECK(std::abs(t.amp[1] - 1.0) <= 1e-15);
}

TEST_CASE("controlled-not permutes exactly the expected basis states") {
  // control = qubit 1, target = qubit 2 on two qubits:
  // |00>->|00>, |01>->|01>, |10>->|11>, |11>->|10>
  auto m = matrix_of(2, [](Statevector& s) { apply_cnot(s, 1, 2); });
  MatrixXcd want(4, 4);
  want << 1, 0, 0, 0,  //
      0, 1, 0, 0,      //
      0, 0, 0, 1,      //
      0, 0, 1, 0;
  CHECK((m - want).cwiseAbs().maxCoeff() <= 1e-15);

  // Reversed control/target.
  auto m2 = matrix_of(2, [](Statevector& s) { apply_cnot(s, 2, 1); });
  MatrixXcd want2(4, 4);
  want2 << 1, 0, 0, 0,  //
      0, 0, 0, 1,       //
      0, 0, 1, 0,       //
      0, 1, 0, 0;
  CHECK((m2 - want2).cwiseAbs().maxCoeff() <= 1e-15);

  Statevector s = new_zero_state(2);
  CHECK_THROWS_AS(apply_cnot(s, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(apply_cnot(s, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(apply_cnot(s, 1, 3), std::invalid_argument);
}

TEST_CASE("rotations on any qubit match the lifted tensor-product operator") {
  Rng rng(601);
  const int n = 4;
  for (int qubit = 1; qubit <= n; ++qubit) {
    double theta = rng.uniform(-kPi, kPi);
    auto got =
        matrix_of(n, [&](Statevector& s) { apply_ry(s, qubit, theta); });
    MatrixXcd want = lift_single(n, qubit, ry_matrix(theta));
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("entangler built from ry and cnot gives the expected pair state") {
  Statevector s = new_zero_state(2);
  apply_ry(s, 1, kPi / 2);
  apply_cnot(s, 1, 2);
  CHECK(std::abs(s.amp[0] - std::sqrt(0.5)) <= 1e-15);
  CHECK(std::abs(s.amp[3] - std::sqrt(0.5)) <= 1e-15);
  CHECK(std::abs(s.amp[1]) <= 1e-15);
  CHECK(std::abs(s.amp[2]) <= 1e-15);
  CHECK(prob_first_qubit_one(s) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("first-qubit probability sums the upper half of the amplitudes") {
  Statevector s = new_zero_state(2);
  s.amp = {{-0.5, 0.0}, {0.5, 0.0}, {-0.5, 0.0}, {0.5, 0.0}};
  CHECK(prob_first_qubit_one(s) == doctest::Approx(0.5).epsilon(1e-15));

  Statevector t = new_zero_state(3);
  t.amp.assign(8, {0.0, 0.0});
  t.amp[5] = {0.6, 0.0};  // 101: qubit 1 set
  t.amp[2] = {0.0, 0.8};  // 010: qubit 1 clear
  CHECK(prob_first_qubit_one(t) == doctest::Approx(0.36).epsilon(1e-15));
}

TEST_CASE("norm survives a long random circuit") {
  Rng rng(602);
  Statevector s = new_zero_state(10);
  for (int g = 0; g < 1000; ++g) {
    if (rng.uniform() < 0.7) {
      apply_ry(s, 1 + static_cast<int>(rng.bounded(10)),
               rng.uniform(-2 * kPi, 2 * kPi));
    } else {
      int c = 1 + static_cast<int>(rng.bounded(10));
      int t = 1 + static_cast<int>(rng.bounded(10));
      if (c == t) t = (t % 10) + 1;
      apply_cnot(s, c, t);
    }
  }
  CHECK(std::abs(norm(s) - 1.0) <= 1e-12);
}

TEST_CASE("gates act linearly") {
  Rng rng(603);
  const int n = 3;
  Statevector a = new_zero_state(n), b = new_zero_state(n);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    a.amp[i] = {rng.normal(), rng.normal()};
    b.amp[i] = {rng.normal(), rng.normal()};
  }
  const std::complex<double> ca{0.3, -1.1}, cb{-0.7, 0.2};
  Statevector mix = new_zero_state(n);
  for (std::size_t i = 0; i < mix.dim(); ++i) {
    mix.amp[i] = ca * a.amp[i] + cb * b.amp[i];
  }
  auto circuit = [](Statevector& s) {
    apply_ry(s, 2, 0.9);
    apply_cnot(s, 3, 1);
    apply_ry(s, 1, -2.2);
  };
  circuit(a);
  circuit(b);
  circuit(mix);
  for (std::size_t i = 0; i < mix.dim(); ++i) {
    CHECK(std::abs(mix.amp[i] - (ca * a.amp[i] + cb * b.amp[i])) <= 1e-13);
  }
}

TEST_CASE("rotation of a product state leaves the other qubits' marginals alone") {
  Statevector s = new_zero_state(3);
  apply_ry(s, 2, 0.7);  // prepare something nontrivial on qubit 2
  apply_ry(s, 1, 1.3);
  double p_before = prob_first_qubit_one(s);
  apply_ry(s, 3, 2.1);  // acting on qubit 3 must not change qubit 1's marginal
  CHECK(prob_first_qubit_one(s) == doctest::Approx(p_before).epsilon(1e-14));
}

TEST_CASE("inverse rotation undoes the original") {
  Rng rng(604);
  Statevector s = new_zero_state(4);
  for (std::size_t i = 0; i < s.dim(); ++i) s.amp[i] = {rng.normal(), 0.0};
  Statevector orig = s;
  apply_ry(s, 3, 1.234);
  apply_ry(s, 3, -1.234);
  for (std::size_t i = 0; i < s.dim(); ++i) {
    CHECK(std::abs(s.amp[i] - orig.amp[i]) <= 1e-14);
  }
}
