#pragma once

#include <Eigen/Dense>

#include <vector>

#include "qdyn/basis.hpp"
#include "qdyn/gauge_field.hpp"
#include "qdyn/observable.hpp"
#include "qdyn/state.hpp"

namespace qdyn {

// Observable rate operator assembled from the physical fields:
//   dL/dt = (Q/m) (dL/dv_i) * E1_i
//         + (Q / m c) eps_ijl ((dL/dv_i) * B1_l) * v_j
// with * the symmetrized product, applied left to right. Profiles stay
// attached so the operator can be evaluated at any time.
struct RateTerm {
  Eigen::MatrixXcd op;
  TimeProfile profile;
};

struct RateOperator {
  int dim{0};
  std::vector<RateTerm> electric;
  std::vector<RateTerm> magnetic;
  bool impulsive_dropped{false};

  Eigen::MatrixXcd at(double t) const;
  double min_window() const;
};

// Public constructor; requires L to pass verify_unperturbed_invariance
// (the literal rate law is first-order consistent only for invariants).
RateOperator rate_operator(const ObservableSpec& spec, const PhysicalFields& fields,
                           const Basis& basis);

enum class StepRule { left_endpoint, midpoint };

struct Trajectory {
  std::vector<double> times;
  std::vector<double> values;
  double dt{0.0};
  bool used_invariant_path{false};
};

// First-order expectation evolution without wavefunction updates. The state
// enters only through unperturbed-flow expectations of degree-<= 2
// observables; each step accumulates the rate expectation and transports the
// accumulated change with the exact unperturbed flow. For motion invariants
// the transport is the identity and the scheme reduces to the plain stepped
// sum of rate expectations. dt must satisfy dt <= t1/100 when a finite
// window exists.
Trajectory evolve_expectation(const ObservableSpec& spec, const PhysicalFields& fields,
                              const Basis& basis, const State& psi0, double T, double dt,
                              StepRule rule = StepRule::left_endpoint);

// Residual of the bracket form of the rate law against the field form at
// time t, max-abs over the interior block, normalized by
// 1 + max-abs(field form). The bracket form is
//   dL/dt = Q {L, Phi1} + (Q/c) {L, q_i} * dA1_i/dt
//         + (Q/c) ({L, q_j} * {A1_j, H0} - {L, A1_j} * {q_j, H0})
// with {f, g} = [f, g]/(i hbar). t must avoid profile jump instants.
double poisson_form_residual(const ObservableSpec& spec, const GaugeField& field,
                             const Basis& basis, double t);

}  // namespace qdyn
