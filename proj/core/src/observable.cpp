#include "qdyn/observable.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qdyn {

bool is_velocity(PhaseVar v) { return v == PhaseVar::vx || v == PhaseVar::vy; }

int axis_of(PhaseVar v) {
  return (v == PhaseVar::qx || v == PhaseVar::vx) ? 0 : 1;
}

std::string to_string(PhaseVar v) {
  switch (v) {
    case PhaseVar::qx: return "qx";
    case PhaseVar::qy: return "qy";
    case PhaseVar::vx: return "vx";
    case PhaseVar::vy: return "vy";
  }
  return "?";
}

void ObservableSpec::validate() const {
  if (ndim != 1 && ndim != 2) throw std::invalid_argument("ObservableSpec: ndim must be 1 or 2");
  for (const ObservableTerm& t : terms) {
    if (t.factors.size() > 2) {
      throw std::invalid_argument("ObservableSpec '" + name + "': degree exceeds 2");
    }
    for (PhaseVar v : t.factors) {
      if (axis_of(v) >= ndim) {
        throw std::invalid_argument("ObservableSpec '" + name + "': variable " + to_string(v) +
                                    " outside a " + std::to_string(ndim) + "D problem");
      }
    }
  }
}

int ObservableSpec::degree() const {
  int d = 0;
  for (const ObservableTerm& t : terms) d = std::max(d, static_cast<int>(t.factors.size()));
  return d;
}

ObservableSpec energy_spec(const Basis& basis) {
  const double m = basis.constants.mass;
  const double w = basis.omega0;
  ObservableSpec s;
  s.name = "energy";
  s.ndim = basis.ndim;
  s.terms.push_back({0.5 * m, {PhaseVar::vx, PhaseVar::vx}});
  s.terms.push_back({0.5 * m * w * w, {PhaseVar::qx, PhaseVar::qx}});
  if (basis.ndim == 2) {
    s.terms.push_back({0.5 * m, {PhaseVar::vy, PhaseVar::vy}});
    s.terms.push_back({0.5 * m * w * w, {PhaseVar::qy, PhaseVar::qy}});
  }
  return s;
}

ObservableSpec lz_spec(const Constants& constants) {
  const double m = constants.mass;
  ObservableSpec s;
  s.name = "lz";
  s.ndim = 2;
  s.terms.push_back({m, {PhaseVar::qx, PhaseVar::vy}});
  s.terms.push_back({-m, {PhaseVar::qy, PhaseVar::vx}});
  return s;
}

ObservableSpec coordinate_spec(PhaseVar var, int ndim) {
  ObservableSpec s;
  s.name = to_string(var);
  s.ndim = ndim;
  s.terms.push_back({1.0, {var}});
  s.validate();
  return s;
}

namespace {

const Operator& var_operator(const Basis& basis, PhaseVar v) {
  int axis = axis_of(v);
  if (axis >= basis.ndim) {
    throw std::invalid_argument("var_operator: variable " + to_string(v) + " outside the basis");
  }
  return is_velocity(v) ? basis.v[axis] : basis.q[axis];
}

}  // namespace

Operator build_observable(const ObservableSpec& spec, const Basis& basis) {
  spec.validate();
  if (spec.ndim != basis.ndim) {
    throw std::invalid_argument("build_observable: spec/basis ndim mismatch for " + spec.name);
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(basis.dim, basis.dim);
  for (const ObservableTerm& t : spec.terms) {
    if (t.factors.empty()) {
      m += t.coeff * Eigen::MatrixXcd::Identity(basis.dim, basis.dim);
    } else if (t.factors.size() == 1) {
      m += t.coeff * var_operator(basis, t.factors[0]).m;
    } else {
      Operator prod = sym_product(var_operator(basis, t.factors[0]),
                                  var_operator(basis, t.factors[1]), basis.interior_dim);
      m += t.coeff * prod.m;
    }
  }
  return Operator::make(spec.name, std::move(m), true, basis.interior_dim);
}

Operator lz_squared_operator(const Basis& basis) {
  if (!basis.lz) throw std::invalid_argument("lz_squared_operator: basis has no Lz");
  Eigen::MatrixXcd m = basis.lz->m * basis.lz->m;
  return Operator::make("lz2", std::move(m), true, basis.interior_dim);
}

double invariance_residual(const Operator& l, const Basis& basis) {
  int d = basis.interior_dim;
  // H0 is diagonal, so the interior block of [L, H0] involves no states
  // outside the interior and is exact.
  Eigen::MatrixXcd comm = commutator(l.m, basis.h0.m).topLeftCorner(d, d);
  double l_norm = l.m.topLeftCorner(d, d).norm();
  double eps_min = basis.energies.head(d).minCoeff();
  double eps_max = basis.energies.head(d).maxCoeff();
  double omega_char = (eps_max - eps_min) / basis.constants.hbar;
  if (omega_char <= 0.0 || l_norm <= 0.0) return 0.0;
  return comm.norm() / (basis.constants.hbar * omega_char * l_norm);
}

bool verify_unperturbed_invariance(const Operator& l, const Basis& basis, double tol) {
  return invariance_residual(l, basis) <= tol;
}

ObservableSpec dv_derivative(const ObservableSpec& spec, int axis) {
  PhaseVar target = (axis == 0) ? PhaseVar::vx : PhaseVar::vy;
  ObservableSpec d;
  d.name = "d(" + spec.name + ")/d" + to_string(target);
  d.ndim = spec.ndim;
  for (const ObservableTerm& t : spec.terms) {
    // Formal product-rule derivative; factor order inside a term is
    // symmetric by construction, so commutative algebra applies.
    for (std::size_t i = 0; i < t.factors.size(); ++i) {
      if (t.factors[i] != target) continue;
      ObservableTerm nt;
      nt.coeff = t.coeff;
      for (std::size_t j = 0; j < t.factors.size(); ++j) {
        if (j != i) nt.factors.push_back(t.factors[j]);
      }
      d.terms.push_back(std::move(nt));
    }
  }
  return d;
}

// ---- phase-space monomial algebra ----

PhaseMonomialBasis::PhaseMonomialBasis(int ndim_) : ndim(ndim_) {
  if (ndim != 1 && ndim != 2) throw std::invalid_argument("PhaseMonomialBasis: ndim must be 1 or 2");
  for (int total = 0; total <= 2; ++total) {
    std::vector<std::array<int, 4>> level;
    for (int a = 0; a <= total; ++a) {
      for (int b = 0; b <= total - a; ++b) {
        for (int c = 0; c <= total - a - b; ++c) {
          int d = total - a - b - c;
          if (ndim == 1 && (b > 0 || d > 0)) continue;
          level.push_back({a, b, c, d});
        }
      }
    }
    std::sort(level.begin(), level.end());
    monomials.insert(monomials.end(), level.begin(), level.end());
  }
}

int PhaseMonomialBasis::index(const std::array<int, 4>& expo) const {
  for (int i = 0; i < size(); ++i) {
    if (monomials[i] == expo) return i;
  }
  return -1;
}

Eigen::VectorXd spec_coefficients(const ObservableSpec& spec, const PhaseMonomialBasis& mb) {
  spec.validate();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(mb.size());
  for (const ObservableTerm& t : spec.terms) {
    std::array<int, 4> e{0, 0, 0, 0};
    for (PhaseVar v : t.factors) {
      switch (v) {
        case PhaseVar::qx: ++e[0]; break;
        case PhaseVar::qy: ++e[1]; break;
        case PhaseVar::vx: ++e[2]; break;
        case PhaseVar::vy: ++e[3]; break;
      }
    }
    int idx = mb.index(e);
    if (idx < 0) throw std::invalid_argument("spec_coefficients: monomial outside the basis");
    c[idx] += t.coeff;
  }
  return c;
}

ObservableSpec spec_from_coefficients(const Eigen::VectorXd& c, const PhaseMonomialBasis& mb,
                                      const std::string& name) {
  if (c.size() != mb.size()) throw std::invalid_argument("spec_from_coefficients: size mismatch");
  ObservableSpec s;
  s.name = name;
  s.ndim = mb.ndim;
  for (int i = 0; i < mb.size(); ++i) {
    if (c[i] == 0.0) continue;
    const auto& e = mb.monomials[i];
    ObservableTerm t;
    t.coeff = c[i];
    for (int r = 0; r < e[0]; ++r) t.factors.push_back(PhaseVar::qx);
    for (int r = 0; r < e[1]; ++r) t.factors.push_back(PhaseVar::qy);
    for (int r = 0; r < e[2]; ++r) t.factors.push_back(PhaseVar::vx);
    for (int r = 0; r < e[3]; ++r) t.factors.push_back(PhaseVar::vy);
    s.terms.push_back(std::move(t));
  }
  return s;
}

Eigen::MatrixXd flow_matrix(const PhaseMonomialBasis& mb, double omega0, double tau) {
  if (!(omega0 > 0.0)) throw std::invalid_argument("flow_matrix: omega0 must be positive");
  const double cs = std::cos(omega0 * tau);
  const double sn = std::sin(omega0 * tau);
  // Heisenberg flow of the linear generators under H0:
  //   q_i(tau) = q_i cos + (v_i / omega) sin
  //   v_i(tau) = -omega q_i sin + v_i cos
  // Row order of the linear coefficients: (qx, qy, vx, vy).
  auto flow_linear = [&](int var) {
    std::array<double, 4> w{0, 0, 0, 0};
    if (var < 2) {
      w[var] = cs;
      w[var + 2] = sn / omega0;
    } else {
      w[var - 2] = -omega0 * sn;
      w[var] = cs;
    }
    return w;
  };

  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(mb.size(), mb.size());
  for (int col = 0; col < mb.size(); ++col) {
    const auto& e = mb.monomials[col];
    // Expand the product of flowed linear factors (at most two).
    std::map<std::array<int, 4>, double> poly;
    poly[{0, 0, 0, 0}] = 1.0;
    for (int var = 0; var < 4; ++var) {
      for (int rep = 0; rep < e[var]; ++rep) {
        std::array<double, 4> w = flow_linear(var);
        std::map<std::array<int, 4>, double> next;
        for (const auto& [expo, coeff] : poly) {
          for (int v = 0; v < 4; ++v) {
            if (w[v] == 0.0) continue;
            std::array<int, 4> ne = expo;
            ++ne[v];
            next[ne] += coeff * w[v];
          }
        }
        poly = std::move(next);
      }
    }
    if (e == std::array<int, 4>{0, 0, 0, 0}) {
      g(col, col) = 1.0;
      continue;
    }
    for (const auto& [expo, coeff] : poly) {
      int row = mb.index(expo);
      if (row < 0) throw std::logic_error("flow_matrix: flow left the monomial basis");
      g(row, col) += coeff;
    }
  }
  return g;
}

}  // namespace qdyn
