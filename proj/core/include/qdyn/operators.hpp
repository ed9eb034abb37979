#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>

#include "qdyn/constants.hpp"

namespace qdyn {

// Matrix representation of an operator on a truncated basis. Matrix elements
// that involve only retained states are exact; rows/columns touching the
// truncation boundary may be corrupted by discarded couplings, so validity
// claims are made on the interior block (see Basis::interior_dim).
struct Operator {
  std::string label;
  bool hermitian_hint{false};
  Eigen::MatrixXcd m;

  // Checks the hermiticity hint on the leading interior block and throws
  // std::invalid_argument if it fails.
  static Operator make(std::string label, Eigen::MatrixXcd m, bool hermitian_hint,
                       int interior_dim);

  int dim() const { return static_cast<int>(m.rows()); }
};

// max |M_ij| over the leading interior_dim x interior_dim block.
double interior_max_abs(const Eigen::MatrixXcd& m, int interior_dim);

// Symmetrized product (fg + gf)/2. Hermitian whenever both factors are.
Operator sym_product(const Operator& f, const Operator& g, int interior_dim);

// Quantum bracket (fg - gf)/(i hbar), the commutator divided by i hbar.
// Hermitian whenever both arguments are.
Operator commutator_bracket(const Operator& f, const Operator& g, const Constants& constants,
                            int interior_dim);

// Plain commutator fg - gf.
Eigen::MatrixXcd commutator(const Eigen::MatrixXcd& f, const Eigen::MatrixXcd& g);

}  // namespace qdyn
