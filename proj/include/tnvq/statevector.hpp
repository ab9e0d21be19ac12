#pragma once

#include <complex>
#include <vector>

namespace tnvq {

// Full statevector of an n-qubit register. Qubit 1 is the most significant
// bit of the basis index, so amp[i] multiplies |b_1 b_2 ... b_n> where b_1 is
// the top bit of i.
struct Statevector {
  int n = 0;
  std::vector<std::complex<double>> amp;

  std::size_t dim() const { return amp.size(); }
};

Statevector new_zero_state(int n);  // 1 <= n <= 24, |00...0>

// Ry(theta) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]] on the given qubit.
void apply_ry(Statevector& state, int qubit, double theta);
void apply_cnot(Statevector& state, int control, int target);

double prob_first_qubit_one(const Statevector& state);

double norm(const Statevector& state);

}  // namespace tnvq
