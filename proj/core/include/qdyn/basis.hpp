#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "qdyn/constants.hpp"
#include "qdyn/operators.hpp"

namespace qdyn {

enum class BasisKind { ho1d, ho2d };

// Labels an energy eigenstate. 1D: n is the excitation number, m_ang = 0.
// 2D isotropic: n is the shell number N and m_ang the angular momentum
// quantum number, m_ang in {-N, -N+2, ..., N}.
struct StateLabel {
  int n{0};
  int m_ang{0};
};

// Truncated harmonic-oscillator basis with its canonical operator set.
// States are ordered by shell, so the interior block (states that linear
// ladder operators cannot couple to the truncation boundary) is the leading
// interior_dim x interior_dim block of every matrix.
struct Basis {
  BasisKind kind{BasisKind::ho1d};
  double omega0{1.0};
  int n_max{0};
  int dim{0};
  int interior_dim{0};
  int ndim{1};  // spatial dimensions
  Constants constants;

  std::vector<StateLabel> labels;
  Eigen::VectorXd energies;  // nondecreasing

  std::vector<Operator> q;   // position components, size ndim
  std::vector<Operator> p;   // canonical momentum components
  std::vector<Operator> p0;  // unperturbed kinetic momentum; equals p here (A0 = 0)
  std::vector<Operator> v;   // velocity p0 / m
  Operator h0;
  std::optional<Operator> lz;  // ho2d only

  int index_of(int n, int m_ang) const;  // throws if the label is not retained
  bool is_interior(int index) const { return index >= 0 && index < interior_dim; }

  // Spectral range of H0 over the retained basis, (eps_max - eps_min)/hbar.
  double omega_max() const;
};

// Builds the basis and operator set. n_max < 4 is rejected. For ho2d the
// retained states are the full shells N <= n_max and the interior block is
// N <= n_max - 2; for ho1d likewise n <= n_max and n <= n_max - 2.
Basis build_basis(BasisKind kind, double omega0, int n_max, const Constants& constants);

}  // namespace qdyn
