#include "qdyn/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace qdyn {

CoordPoly CoordPoly::zero(int ndim) {
  CoordPoly p;
  p.ndim = ndim;
  return p;
}

CoordPoly CoordPoly::constant(int ndim, double c) { return monomial(ndim, c, 0, 0); }

CoordPoly CoordPoly::monomial(int ndim, double c, int ex, int ey) {
  if (ndim != 1 && ndim != 2) throw std::invalid_argument("CoordPoly: ndim must be 1 or 2");
  if (ex < 0 || ey < 0 || ex + ey > 2) {
    throw std::invalid_argument("CoordPoly: monomial degree must be between 0 and 2");
  }
  if (ndim == 1 && ey != 0) throw std::invalid_argument("CoordPoly: y exponent in a 1D polynomial");
  CoordPoly p;
  p.ndim = ndim;
  p.terms.push_back(Term{c, ex, ey});
  p.canonicalize();
  return p;
}

void CoordPoly::canonicalize() {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    return std::pair(a.ex, a.ey) < std::pair(b.ex, b.ey);
  });
  std::vector<Term> merged;
  for (const Term& t : terms) {
    if (!merged.empty() && merged.back().ex == t.ex && merged.back().ey == t.ey) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Term& t) { return t.coeff == 0.0; }),
               merged.end());
  terms = std::move(merged);
}

int CoordPoly::degree() const {
  int d = 0;
  for (const Term& t : terms) d = std::max(d, t.ex + t.ey);
  return d;
}

CoordPoly CoordPoly::plus(const CoordPoly& other) const {
  if (ndim != other.ndim) throw std::invalid_argument("CoordPoly::plus: ndim mismatch");
  CoordPoly r = *this;
  r.terms.insert(r.terms.end(), other.terms.begin(), other.terms.end());
  r.canonicalize();
  return r;
}

CoordPoly CoordPoly::scaled(double s) const {
  CoordPoly r = *this;
  for (Term& t : r.terms) t.coeff *= s;
  r.canonicalize();
  return r;
}

CoordPoly CoordPoly::times(const CoordPoly& other) const {
  if (ndim != other.ndim) throw std::invalid_argument("CoordPoly::times: ndim mismatch");
  CoordPoly r = CoordPoly::zero(ndim);
  for (const Term& a : terms) {
    for (const Term& b : other.terms) {
      int ex = a.ex + b.ex;
      int ey = a.ey + b.ey;
      if (ex + ey > 2) {
        throw std::invalid_argument("CoordPoly::times: product exceeds degree 2");
      }
      r.terms.push_back(Term{a.coeff * b.coeff, ex, ey});
    }
  }
  r.canonicalize();
  return r;
}

CoordPoly CoordPoly::derivative(int axis) const {
  if (axis < 0 || axis >= ndim) throw std::invalid_argument("CoordPoly::derivative: bad axis");
  CoordPoly r = CoordPoly::zero(ndim);
  for (const Term& t : terms) {
    if (axis == 0 && t.ex > 0) r.terms.push_back(Term{t.coeff * t.ex, t.ex - 1, t.ey});
    if (axis == 1 && t.ey > 0) r.terms.push_back(Term{t.coeff * t.ey, t.ex, t.ey - 1});
  }
  r.canonicalize();
  return r;
}

bool CoordPoly::equals(const CoordPoly& other) const {
  if (ndim != other.ndim || terms.size() != other.terms.size()) return false;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].ex != other.terms[i].ex || terms[i].ey != other.terms[i].ey ||
        terms[i].coeff != other.terms[i].coeff) {
      return false;
    }
  }
  return true;
}

Operator promote(const CoordPoly& poly, const Basis& basis, const std::string& label) {
  if (poly.ndim != basis.ndim) throw std::invalid_argument("promote: ndim mismatch for " + label);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(basis.dim, basis.dim);
  Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(basis.dim, basis.dim);
  auto power = [&](const Eigen::MatrixXcd& a, int e) {
    if (e == 0) return eye;
    if (e == 1) return a;
    return Eigen::MatrixXcd(a * a);
  };
  for (const CoordPoly::Term& t : poly.terms) {
    Eigen::MatrixXcd xe = power(basis.q[0].m, t.ex);
    if (basis.ndim == 2 && t.ey > 0) {
      Eigen::MatrixXcd ye = power(basis.q[1].m, t.ey);
      m += t.coeff * 0.5 * (xe * ye + ye * xe);
    } else {
      m += t.coeff * xe;
    }
  }
  return Operator::make(label, std::move(m), true, basis.interior_dim);
}

}  // namespace qdyn
