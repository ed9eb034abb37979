#pragma once

#include <string>
#include <vector>

#include "qdyn/basis.hpp"
#include "qdyn/constants.hpp"
#include "qdyn/polynomial.hpp"
#include "qdyn/pulse.hpp"

namespace qdyn {

// One separable contribution poly(x) * profile(t) to a field component.
struct SeparableTerm {
  CoordPoly spatial;
  TimeProfile profile;
};

// Sum of separable terms. canonicalize() folds profile amplitudes into the
// polynomials, merges terms with identical shapes, and drops exact zeros, so
// two components that are equal as functions of (x, t) compare equal
// coefficient by coefficient whenever they were assembled from the same
// inputs.
struct FieldComponent {
  std::vector<SeparableTerm> terms;

  void canonicalize();
  bool is_zero() const { return terms.empty(); }
  double max_window() const;  // largest finite t1; 0 when none

  // Value as a promoted operator at fixed t.
  Eigen::MatrixXcd value_matrix(double t, const Basis& basis) const;
  // Regular part of the time derivative as a component.
  FieldComponent time_derivative_regular() const;
  // Net jump polynomial at each discontinuity time, exact zeros dropped.
  std::vector<std::pair<double, CoordPoly>> net_jumps() const;

  bool coeff_equal(const FieldComponent& other) const;

  FieldComponent plus(const FieldComponent& other) const;
  FieldComponent scaled(double s) const;
};

// First-order potentials (A1, Phi1). The unperturbed problem has A0 = 0 and
// the static oscillator potential, so these carry the whole perturbation.
struct GaugeField {
  int ndim{1};
  std::vector<FieldComponent> a1;  // size ndim
  FieldComponent phi1;
  // Set when a gauge transformation discarded a delta-function Phi1
  // contribution (gauge function with a jumping profile). The idealized
  // pulses are never differentiated across their jumps.
  bool impulsive_phi1_dropped{false};

  static GaugeField empty(int ndim);
  void canonicalize();
  void validate() const;  // degree caps, component count
};

// Scalar gauge function f(x, t), same separable representation.
struct GaugeFunction {
  int ndim{1};
  FieldComponent f;
};

// Physical fields derived from the potentials:
//   E1_i = -d(Phi1)/dx_i - (1/c) d(A1_i)/dt
//   B1_z = d(A1_y)/dx - d(A1_x)/dy   (2D only)
// Construct only via physical_fields(); the impulsive flag records that a
// rect-edge delta in E1 was dropped.
struct PhysicalFields {
  int ndim{1};
  std::vector<FieldComponent> e1;
  FieldComponent b1z;
  bool impulsive_e1{false};
};

// A1_i -> A1_i + d(f)/dx_i, Phi1 -> Phi1 - (1/c) d(f)/dt. Exact at
// coefficient level. A jumping gauge-function profile contributes a delta to
// Phi1; the delta is dropped and flagged on the result.
GaugeField gauge_transform(const GaugeField& field, const GaugeFunction& f,
                           const Constants& constants);

PhysicalFields physical_fields(const GaugeField& field, const Constants& constants);

}  // namespace qdyn
