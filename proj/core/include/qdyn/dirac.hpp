#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "qdyn/basis.hpp"
#include "qdyn/gauge_field.hpp"
#include "qdyn/state.hpp"

namespace qdyn {

// One separable contribution op * profile(t)^power to H1(t). power 2 is used
// by the A1^2 term so profiles never need symbolic products.
struct H1Term {
  Operator op;
  TimeProfile profile;
  int power{1};
};

struct PerturbingHamiltonian {
  int dim{0};
  std::vector<H1Term> terms;

  Eigen::MatrixXcd at(double t) const;
  Eigen::MatrixXcd at_limit(double t, bool from_right) const;
  std::vector<double> breakpoints(double T) const;
  // Shortest finite profile window; 0 when none. Drives step-size policies.
  double min_window() const;
  double max_abs_omega_d() const;
};

// H1 = -(Q/mc) A1 * p + (Q^2 / 2 m c^2) A1^2 + Q Phi1, with * the
// symmetrized operator product. The A1^2 cross terms require every A1
// component to carry a single profile shape and degree <= 1 polynomials;
// include_a2 defaults to off because the term is second order in the field.
PerturbingHamiltonian assemble_h1(const GaugeField& field, const Basis& basis, bool include_a2);

// Interaction-picture coefficient derivative on the interior block:
//   dC_n/dt = -(i/hbar) sum_k (H1)_{nk} e^{i omega_nk t} C_k.
Eigen::VectorXcd coefficient_rhs(const PerturbingHamiltonian& h1, const Basis& basis, double t,
                                 const Eigen::VectorXcd& c);

struct Rk4Result {
  Eigen::VectorXcd c;           // final interior coefficients
  std::vector<double> times;    // step boundaries, size steps + 1
  std::vector<double> norms2;   // |C|^2 at the step boundaries
  double dt{0.0};               // realized step
};

// Classic RK4 on coefficient_rhs. dt must satisfy
// dt <= min(0.01 / omega_max, t1 / 200) (the t1 cap applies when a finite
// window exists); violations throw PolicyError.
Rk4Result integrate_coefficients_rk4(const PerturbingHamiltonian& h1, const Basis& basis,
                                     const Eigen::VectorXcd& c0, double T, double dt);

// Literal first-order Euler update C <- C - (i/hbar) Htilde(t_j) C dt from a
// basis eigenstate, recording |C|^2 after each step. No step-size policy:
// the point is the norm growth of the uncorrected update.
std::vector<double> euler_norm_demo(const PerturbingHamiltonian& h1, const Basis& basis, int k,
                                    double dt, int steps);

// First-order amplitude -(i/hbar) int_0^T (H1)_{nk}(tau) e^{i omega_nk tau} dtau
// for interior n, k.
std::complex<double> first_order_amplitude(const PerturbingHamiltonian& h1, const Basis& basis,
                                           int n, int k, double T);

double first_order_probability(const PerturbingHamiltonian& h1, const Basis& basis, int n, int k,
                               double T);

struct GaugeSensitivity {
  double p_original{0.0};
  double p_transformed{0.0};
  double rel_diff{0.0};  // |a - b| / max(a, b, tiny)
};

// First-order k -> n probability computed in the given gauge and in the
// gauge transformed by f. The spread quantifies the gauge dependence of the
// standard first-order formula.
GaugeSensitivity gauge_sensitivity(const GaugeField& field, const GaugeFunction& f,
                                   const Basis& basis, int k, int n, double T, bool include_a2);

}  // namespace qdyn
