#include "qdyn/basis.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <utility>

namespace qdyn {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// 1D ladder: a |n> = sqrt(n) |n-1> on the retained levels.
Eigen::MatrixXcd lowering_1d(int dim) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

}  // namespace

int Basis::index_of(int n, int m_ang) const {
  for (int i = 0; i < dim; ++i) {
    if (labels[i].n == n && labels[i].m_ang == m_ang) return i;
  }
  throw std::invalid_argument("Basis::index_of: state (" + std::to_string(n) + ", " +
                              std::to_string(m_ang) + ") is not retained");
}

double Basis::omega_max() const {
  return (energies.maxCoeff() - energies.minCoeff()) / constants.hbar;
}

Basis build_basis(BasisKind kind, double omega0, int n_max, const Constants& constants) {
  constants.validate();
  if (!(omega0 > 0.0)) throw std::invalid_argument("build_basis: omega0 must be positive");
  if (n_max < 4) throw std::invalid_argument("build_basis: n_max must be at least 4");

  Basis b;
  b.kind = kind;
  b.omega0 = omega0;
  b.n_max = n_max;
  b.ndim = (kind == BasisKind::ho1d) ? 1 : 2;
  b.constants = constants;

  const double hbar = constants.hbar;
  const double mass = constants.mass;
  const double lam = std::sqrt(hbar / (2.0 * mass * omega0));
  const double mu = std::sqrt(hbar * mass * omega0 / 2.0);

  if (kind == BasisKind::ho1d) {
    b.dim = n_max + 1;
    b.interior_dim = n_max - 1;
    b.labels.resize(b.dim);
    b.energies.resize(b.dim);
    for (int n = 0; n <= n_max; ++n) {
      b.labels[n] = StateLabel{n, 0};
      b.energies[n] = hbar * omega0 * (n + 0.5);
    }
    Eigen::MatrixXcd a = lowering_1d(b.dim);
    Eigen::MatrixXcd ad = a.adjoint();
    b.q.push_back(Operator::make("q_x", lam * (a + ad), true, b.interior_dim));
    b.p.push_back(Operator::make("p_x", kI * mu * (ad - a), true, b.interior_dim));
  } else {
    b.dim = (n_max + 1) * (n_max + 2) / 2;
    b.interior_dim = (n_max - 1) * n_max / 2;
    b.labels.reserve(b.dim);
    b.energies.resize(b.dim);
    // shell N ascending, m_ang descending inside a shell
    std::map<std::pair<int, int>, int> pos;  // (n_d, n_g) -> index
    for (int bigN = 0; bigN <= n_max; ++bigN) {
      for (int nd = bigN; nd >= 0; --nd) {
        int ng = bigN - nd;
        int idx = static_cast<int>(b.labels.size());
        b.labels.push_back(StateLabel{bigN, nd - ng});
        b.energies[idx] = hbar * omega0 * (bigN + 1.0);
        pos[{nd, ng}] = idx;
      }
    }
    // circular ladders a_d, a_g; cartesian ladders follow from
    // a_x = (a_d + a_g)/sqrt(2), a_y = i (a_d - a_g)/sqrt(2)
    Eigen::MatrixXcd adw = Eigen::MatrixXcd::Zero(b.dim, b.dim);  // a_d
    Eigen::MatrixXcd agw = Eigen::MatrixXcd::Zero(b.dim, b.dim);  // a_g
    for (const auto& [key, idx] : pos) {
      auto [nd, ng] = key;
      if (nd > 0) adw(pos.at({nd - 1, ng}), idx) = std::sqrt(static_cast<double>(nd));
      if (ng > 0) agw(pos.at({nd, ng - 1}), idx) = std::sqrt(static_cast<double>(ng));
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXcd ax = inv_sqrt2 * (adw + agw);
    Eigen::MatrixXcd ay = kI * inv_sqrt2 * (adw - agw);
    Eigen::MatrixXcd axd = ax.adjoint();
    Eigen::MatrixXcd ayd = ay.adjoint();
    b.q.push_back(Operator::make("q_x", lam * (ax + axd), true, b.interior_dim));
    b.q.push_back(Operator::make("q_y", lam * (ay + ayd), true, b.interior_dim));
    b.p.push_back(Operator::make("p_x", kI * mu * (axd - ax), true, b.interior_dim));
    b.p.push_back(Operator::make("p_y", kI * mu * (ayd - ay), true, b.interior_dim));
    // Lz is diagonal in this basis; the product form x p_y - y p_x matches it
    // exactly on the interior block but picks up boundary corruption, so the
    // eigenvalue form is authoritative.
    Eigen::MatrixXcd lz = Eigen::MatrixXcd::Zero(b.dim, b.dim);
    for (int i = 0; i < b.dim; ++i) lz(i, i) = hbar * b.labels[i].m_ang;
    b.lz = Operator::make("Lz", std::move(lz), true, b.interior_dim);
  }

  Eigen::MatrixXcd h0 = Eigen::MatrixXcd::Zero(b.dim, b.dim);
  for (int i = 0; i < b.dim; ++i) h0(i, i) = b.energies[i];
  b.h0 = Operator::make("H0", std::move(h0), true, b.interior_dim);

  for (int d = 0; d < b.ndim; ++d) {
    b.p0.push_back(Operator::make(std::string("p0_") + (d == 0 ? "x" : "y"), b.p[d].m, true,
                                  b.interior_dim));
    b.v.push_back(Operator::make(std::string("v_") + (d == 0 ? "x" : "y"), b.p[d].m / mass, true,
                                 b.interior_dim));
  }
  return b;
}

}  // namespace qdyn
