#include "qdyn/operators.hpp"

#include <algorithm>
#include <stdexcept>

namespace qdyn {

double interior_max_abs(const Eigen::MatrixXcd& m, int interior_dim) {
  int n = std::min<int>(interior_dim, static_cast<int>(m.rows()));
  if (n <= 0) return 0.0;
  return m.topLeftCorner(n, n).cwiseAbs().maxCoeff();
}

Operator Operator::make(std::string label, Eigen::MatrixXcd m, bool hermitian_hint,
                        int interior_dim) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("Operator::make: " + label + " is not square");
  }
  if (hermitian_hint) {
    Eigen::MatrixXcd dev = m - m.adjoint();
    double scale = interior_max_abs(m, interior_dim);
    double err = interior_max_abs(dev, interior_dim);
    if (err > 1e-12 * std::max(scale, 1e-300)) {
      throw std::invalid_argument("Operator::make: " + label +
                                  " violates its hermiticity hint on the interior block");
    }
  }
  Operator op;
  op.label = std::move(label);
  op.hermitian_hint = hermitian_hint;
  op.m = std::move(m);
  return op;
}

Operator sym_product(const Operator& f, const Operator& g, int interior_dim) {
  if (f.dim() != g.dim()) {
    throw std::invalid_argument("sym_product: dimension mismatch between " + f.label + " and " +
                                g.label);
  }
  Eigen::MatrixXcd m = 0.5 * (f.m * g.m + g.m * f.m);
  return Operator::make("(" + f.label + "*" + g.label + ")", std::move(m),
                        f.hermitian_hint && g.hermitian_hint, interior_dim);
}

Eigen::MatrixXcd commutator(const Eigen::MatrixXcd& f, const Eigen::MatrixXcd& g) {
  return f * g - g * f;
}

Operator commutator_bracket(const Operator& f, const Operator& g, const Constants& constants,
                            int interior_dim) {
  if (f.dim() != g.dim()) {
    throw std::invalid_argument("commutator_bracket: dimension mismatch between " + f.label +
                                " and " + g.label);
  }
  std::complex<double> ih(0.0, constants.hbar);
  Eigen::MatrixXcd m = (f.m * g.m - g.m * f.m) / ih;
  return Operator::make("{" + f.label + "," + g.label + "}", std::move(m),
                        f.hermitian_hint && g.hermitian_hint, interior_dim);
}

}  // namespace qdyn
