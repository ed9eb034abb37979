#pragma once

#include <Eigen/Dense>

#include <complex>

#include "qdyn/basis.hpp"

namespace qdyn {

// Normalized state vector over the retained basis. Construction enforces
// |norm - 1| <= 1e-12.
struct State {
  Eigen::VectorXcd coeffs;

  explicit State(Eigen::VectorXcd c);

  static State eigenstate(const Basis& basis, int index);
  // Rescales c to unit norm; rejects the zero vector.
  static State normalized(Eigen::VectorXcd c);

  int dim() const { return static_cast<int>(coeffs.size()); }
};

// <bra| op |ket> for interior basis indices; throws on indices outside the
// interior block, where matrix elements are not trustworthy.
std::complex<double> matrix_element(const Operator& op, const Basis& basis, int bra, int ket);

std::complex<double> expectation(const Operator& op, const State& psi);

// Expectation of a hermitian operator as a real number. Enforces
// |Im| <= 1e-10 |Re| + 1e-12 and throws otherwise.
double real_expectation(const Operator& op, const State& psi);

}  // namespace qdyn
