#include "qdyn/state.hpp"

#include <cmath>
#include <stdexcept>

namespace qdyn {

State::State(Eigen::VectorXcd c) : coeffs(std::move(c)) {
  double norm = coeffs.norm();
  if (std::abs(norm - 1.0) > 1e-12) {
    throw std::invalid_argument("State: vector is not normalized (norm = " +
                                std::to_string(norm) + ")");
  }
}

State State::eigenstate(const Basis& basis, int index) {
  if (index < 0 || index >= basis.dim) {
    throw std::invalid_argument("State::eigenstate: index out of range");
  }
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(basis.dim);
  c[index] = 1.0;
  return State(std::move(c));
}

State State::normalized(Eigen::VectorXcd c) {
  double norm = c.norm();
  if (norm <= 0.0) throw std::invalid_argument("State::normalized: zero vector");
  return State(c / norm);
}

std::complex<double> matrix_element(const Operator& op, const Basis& basis, int bra, int ket) {
  if (!basis.is_interior(bra) || !basis.is_interior(ket)) {
    throw std::invalid_argument("matrix_element: indices must lie in the interior block");
  }
  return op.m(bra, ket);
}

std::complex<double> expectation(const Operator& op, const State& psi) {
  if (op.dim() != psi.dim()) {
    throw std::invalid_argument("expectation: dimension mismatch for " + op.label);
  }
  return psi.coeffs.dot(op.m * psi.coeffs);  // Eigen's dot conjugates the left factor
}

double real_expectation(const Operator& op, const State& psi) {
  if (!op.hermitian_hint) {
    throw std::invalid_argument("real_expectation: " + op.label + " is not marked hermitian");
  }
  std::complex<double> e = expectation(op, psi);
  if (std::abs(e.imag()) > 1e-10 * std::abs(e.real()) + 1e-12) {
    throw std::logic_error("real_expectation: imaginary part too large for " + op.label);
  }
  return e.real();
}

}  // namespace qdyn
