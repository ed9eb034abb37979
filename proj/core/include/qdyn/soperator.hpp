#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

#include "qdyn/basis.hpp"
#include "qdyn/gauge_field.hpp"
#include "qdyn/observable.hpp"

namespace qdyn {

// First-order transition matrix of an observable-diagnosed pulse:
//   s_{kk'} = e^{i (omega_k' - omega_k) T} / (i (L_k - L_k'))
//             * int_0^T (dL/dt)_{kk'} e^{i (omega_k - omega_k') t} dt
// on the interior block, for an observable diagonal in the energy basis.
// Pairs with L_k = L_k' are undefined (the construction divides by the
// eigenvalue gap); they carry NaN plus the integral magnitude so callers can
// see whether physical content was lost.
struct SMatrix {
  int dim{0};                       // interior dimension
  Eigen::MatrixXcd s;               // NaN where undefined
  Eigen::MatrixXd numerator_abs;    // |integral| for every off-diagonal pair
  std::vector<std::vector<bool>> defined;
  Eigen::VectorXd l_values;         // interior diagonal of L
};

SMatrix s_matrix(const ObservableSpec& spec, const PhysicalFields& fields, const Basis& basis,
                 double T);

// |s_{nk}|^2; throws if the pair is undefined or outside the interior block.
double transition_probability_s(const SMatrix& s, int n, int k);

struct ConsistencyRow {
  int k{0};
  int kp{0};
  double a_abs{0.0};    // |s^(a)_{k kp}|, or inf when undefined with content
  double b_abs{0.0};
  double rel_diff{0.0};
  std::string verdict;  // "equal" or "unequal"
};

// Compares |s| from two diagnosing observables pair by pair. Rows cover
// pairs where at least one route carries content (a defined nonzero entry,
// or an undefined entry with nonzero integral). An undefined entry with
// nonzero integral is reported as inf: the route's construction breaks down
// on that pair rather than predicting zero.
std::vector<ConsistencyRow> consistency_check(const ObservableSpec& spec_a,
                                              const ObservableSpec& spec_b,
                                              const PhysicalFields& fields, const Basis& basis,
                                              double T, double rel_tol = 1e-6);

}  // namespace qdyn
