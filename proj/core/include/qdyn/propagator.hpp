#pragma once

#include <Eigen/Dense>

#include <vector>

#include "qdyn/basis.hpp"
#include "qdyn/dirac.hpp"
#include "qdyn/gauge_field.hpp"

namespace qdyn {

enum class PropagatorMethod { crank_nicolson, midpoint_exponential };

struct PropagationResult {
  Eigen::VectorXcd psi;        // final state on the full basis
  std::vector<double> times;   // step boundaries
  std::vector<double> norms2;  // squared norm at the boundaries
  std::vector<Eigen::VectorXcd> snapshots;  // empty unless requested
  double dt{0.0};
};

// Reference propagator for H(t) = H0 + H1(t) on the full retained basis.
// Crank-Nicolson solves
//   (1 + i dt H(t_mid) / 2 hbar) psi_{n+1} = (1 - i dt H(t_mid) / 2 hbar) psi_n
// with an LU factorization cached across steps with identical H values, so a
// rect pulse costs two factorizations. midpoint_exponential uses the exact
// exponential of H(t_mid) through an eigendecomposition (also cached).
// Policy: dt <= min(0.05 / omega_max, t1 / 200); each distinct sampled H is
// checked hermitian. Norm drift beyond 1e-10 per 1000 steps throws.
PropagationResult propagate(const PerturbingHamiltonian& h1, const Basis& basis,
                            const Eigen::VectorXcd& psi0, double T, double dt,
                            PropagatorMethod method = PropagatorMethod::crank_nicolson,
                            bool record_snapshots = false);

// |<n|psi(T)>|^2 for a retained basis index n.
double exact_transition(const PropagationResult& result, int n);

// Transition probability measured after undoing the residual gauge phase
// exp(i Q f(x, T) / hbar c); use when the run's potentials came from a known
// gauge function and populations are wanted in the original gauge's sense.
double exact_transition_restored(const PropagationResult& result, const GaugeFunction& f,
                                 const Basis& basis, double T, int n);

std::vector<double> exact_expectation_series(const PropagationResult& result, const Operator& op);

// Closed-form first-order 0 -> 1 probability for a spatially uniform field
// E(t) = e0 * profile(t) along x on the oscillator:
//   P = (Q^2 e0^2 / (2 m hbar omega0)) |int_0^T profile(tau) e^{i omega0 tau} dtau|^2.
// Supported shapes: constant, rect, sine, cosine (closed-form integrals,
// resonance limits included). The profile's own amplitude multiplies e0.
double forced_oscillator_reference(double e0, const TimeProfile& profile, const Basis& basis,
                                   double T);

}  // namespace qdyn
