#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

#include "qdyn/basis.hpp"
#include "qdyn/operators.hpp"

namespace qdyn {

// Phase-space variables an observable may reference. v is the velocity
// p0 / m of the unperturbed problem.
enum class PhaseVar { qx, qy, vx, vy };

bool is_velocity(PhaseVar v);
int axis_of(PhaseVar v);
std::string to_string(PhaseVar v);

// Polynomial observable in (q_i, v_i), total degree <= 2 per term. A term's
// factors multiply with the symmetrized product when promoted.
struct ObservableTerm {
  double coeff{0.0};
  std::vector<PhaseVar> factors;  // size 0, 1 or 2
};

struct ObservableSpec {
  std::string name;
  int ndim{1};
  std::vector<ObservableTerm> terms;

  void validate() const;  // degree cap, variables within ndim
  int degree() const;
};

// Catalog: energy (m v^2 / 2 + m omega0^2 q^2 / 2, equal to H0 since A0 = 0)
// and, in 2D, the angular momentum m (qx vy - qy vx).
ObservableSpec energy_spec(const Basis& basis);
ObservableSpec lz_spec(const Constants& constants);
ObservableSpec coordinate_spec(PhaseVar var, int ndim);

// Promotes a spec to its matrix on the basis.
Operator build_observable(const ObservableSpec& spec, const Basis& basis);

// Matrix square of the built angular momentum; kept as a matrix-level
// observable for invariance checks only (degree 4 as a polynomial).
Operator lz_squared_operator(const Basis& basis);

// Dimensionless invariance residual
//   |[L, H0]|_F / (hbar * omega_char * |L|_F)
// on the interior block, with omega_char the interior spectral range of
// H0 / hbar. Zero (to rounding) certifies a motion invariant.
double invariance_residual(const Operator& l, const Basis& basis);

bool verify_unperturbed_invariance(const Operator& l, const Basis& basis, double tol = 1e-10);

// Formal derivative d/dv_axis of a spec; degree drops by one.
ObservableSpec dv_derivative(const ObservableSpec& spec, int axis);

// ---- phase-space monomial algebra for the evolution scheme ----

// Basis of monomials q^a v^b with total degree <= 2 (6 in 1D, 15 in 2D).
// Under the unperturbed flow the degree-<= 2 space is closed, and Weyl
// (symmetrized) promotion commutes with the linear flow, so coefficient
// vectors evolve exactly.
struct PhaseMonomialBasis {
  int ndim{1};
  // exponents (e_qx, e_qy, e_vx, e_vy)
  std::vector<std::array<int, 4>> monomials;

  explicit PhaseMonomialBasis(int ndim);
  int size() const { return static_cast<int>(monomials.size()); }
  int index(const std::array<int, 4>& expo) const;  // -1 if absent
};

Eigen::VectorXd spec_coefficients(const ObservableSpec& spec, const PhaseMonomialBasis& mb);
ObservableSpec spec_from_coefficients(const Eigen::VectorXd& c, const PhaseMonomialBasis& mb,
                                      const std::string& name);

// G(tau): coefficient matrix of the unperturbed Heisenberg flow,
// (L after time tau) = spec with coefficients G(tau) c. Built from
// q -> q cos + (v/omega) sin, v -> -omega q sin + v cos.
Eigen::MatrixXd flow_matrix(const PhaseMonomialBasis& mb, double omega0, double tau);

}  // namespace qdyn
