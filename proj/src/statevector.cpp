#include "tnvq/statevector.hpp"

#include <cmath>
#include <stdexcept>

namespace tnvq {

namespace {

constexpr int kMaxQubits = 24;

std::size_t bit_stride(const Statevector& s, int qubit) {
  if (qubit < 1 || qubit > s.n) {
    throw std::invalid_argument("qubit index out of range");
  }
  return std::size_t{1} << (s.n - qubit);
}

}  // namespace

Statevector new_zero_state(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw std::invalid_argument("qubit count must be between 1 and 24");
  }
  Statevector s;
  s.n = n;
  s.amp.assign(std::size_t{1} << n, {0.0, 0.0});
  s.amp[0] = {1.0, 0.0};
  return s;
}

void apply_ry(Statevector& state, int qubit, double theta) {
  const std::size_t stride = bit_stride(state, qubit);
  const double c = std::cos(theta / 2.0);
  const double sn = std::sin(theta / 2.0);
  const std::size_t dim = state.dim();
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const std::complex<double> a0 = state.amp[i];
      const std::complex<double> a1 = state.amp[i + stride];
      state.amp[i] = c * a0 - sn * a1;
      state.amp[i + stride] = sn * a0 + c * a1;
    }
  }
}

void apply_cnot(Statevector& state, int control, int target) {
  const std::size_t cbit = bit_stride(state, control);
  const std::size_t tbit = bit_stride(state, target);
  if (control == target) {
    throw std::invalid_argument("control and target must differ");
  }
  const std::size_t dim = state.dim();
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & cbit) && !(i & tbit)) {
      std::swap(state.amp[i], state.amp[i | tbit]);
    }
  }
}

double prob_first_qubit_one(const Statevector& state) {
  const std::size_t half = state.dim() / 2;
  double p = 0.0;
  for (std::size_t i = half; i < state.dim(); ++i) p += std::norm(state.amp[i]);
  return p;
}

double norm(const Statevector& state) {
  double s = 0.0;
  for (const auto& a : state.amp) s += std::norm(a);
  return std::sqrt(s);
}

}  // namespace tnvq
