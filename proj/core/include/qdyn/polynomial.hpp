#pragma once

#include <vector>

#include "qdyn/basis.hpp"
#include "qdyn/operators.hpp"

namespace qdyn {

// Real polynomial in the spatial coordinates (x in 1D, x and y in 2D) with
// total degree <= 2. Terms are kept canonical: sorted by exponent pair,
// merged, exact zeros dropped.
struct CoordPoly {
  int ndim{1};
  struct Term {
    double coeff{0.0};
    int ex{0};
    int ey{0};
  };
  std::vector<Term> terms;

  static CoordPoly zero(int ndim);
  static CoordPoly constant(int ndim, double c);
  // Single monomial c * x^ex * y^ey.
  static CoordPoly monomial(int ndim, double c, int ex, int ey = 0);

  void canonicalize();
  bool is_zero() const { return terms.empty(); }
  int degree() const;

  CoordPoly plus(const CoordPoly& other) const;
  CoordPoly scaled(double s) const;
  // Product; throws if the result exceeds degree 2.
  CoordPoly times(const CoordPoly& other) const;
  CoordPoly derivative(int axis) const;

  bool equals(const CoordPoly& other) const;  // exact coefficient equality
};

// Matrix promotion. Monomials map to x^ex for 1D and to the symmetrized
// product (x^ex y^ey + y^ey x^ex)/2 for 2D, which keeps mixed terms hermitian
// on the truncated basis.
Operator promote(const CoordPoly& poly, const Basis& basis, const std::string& label);

}  // namespace qdyn
