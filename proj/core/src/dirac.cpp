#include "qdyn/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qdyn/errors.hpp"
#include "qdyn/polynomial.hpp"
#include "qdyn/quadrature.hpp"

namespace qdyn {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

double term_value(const H1Term& term, double t) {
  double s = term.profile.value(t);
  return term.power == 2 ? s * s : s;
}

double term_value_limit(const H1Term& term, double t, bool from_right) {
  double s = term.profile.value_limit(t, from_right);
  return term.power == 2 ? s * s : s;
}

// Interaction-picture phases e^{i eps_n t / hbar} on the interior block.
Eigen::VectorXcd interaction_phases(const Basis& basis, double t) {
  Eigen::VectorXcd d(basis.interior_dim);
  for (int n = 0; n < basis.interior_dim; ++n) {
    d[n] = std::exp(kI * (basis.energies[n] * t / basis.constants.hbar));
  }
  return d;
}

Eigen::MatrixXcd interaction_matrix(const PerturbingHamiltonian& h1, const Basis& basis,
                                    double t) {
  Eigen::MatrixXcd h = h1.at(t).topLeftCorner(basis.interior_dim, basis.interior_dim);
  Eigen::VectorXcd d = interaction_phases(basis, t);
  return d.asDiagonal() * h * d.conjugate().asDiagonal();
}

}  // namespace

Eigen::MatrixXcd PerturbingHamiltonian::at(double t) const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const H1Term& term : terms) {
    double s = term_value(term, t);
    if (s != 0.0) m += s * term.op.m;
  }
  return m;
}

Eigen::MatrixXcd PerturbingHamiltonian::at_limit(double t, bool from_right) const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const H1Term& term : terms) {
    double s = term_value_limit(term, t, from_right);
    if (s != 0.0) m += s * term.op.m;
  }
  return m;
}

std::vector<double> PerturbingHamiltonian::breakpoints(double T) const {
  std::vector<double> bp;
  for (const H1Term& term : terms) {
    for (double b : term.profile.breakpoints(T)) bp.push_back(b);
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

double PerturbingHamiltonian::min_window() const {
  double w = 0.0;
  for (const H1Term& term : terms) {
    if (term.profile.has_window()) {
      w = (w == 0.0) ? term.profile.t1 : std::min(w, term.profile.t1);
    }
  }
  return w;
}

double PerturbingHamiltonian::max_abs_omega_d() const {
  double w = 0.0;
  for (const H1Term& term : terms) w = std::max(w, std::abs(term.profile.omega_d));
  return w;
}

PerturbingHamiltonian assemble_h1(const GaugeField& field, const Basis& basis, bool include_a2) {
  if (field.ndim != basis.ndim) throw std::invalid_argument("assemble_h1: ndim mismatch");
  GaugeField f = field;
  f.canonicalize();
  f.validate();

  const double q = basis.constants.charge;
  const double m = basis.constants.mass;
  const double c = basis.constants.c_light;

  PerturbingHamiltonian h1;
  h1.dim = basis.dim;

  // -(Q/mc) A1_i * p_i
  for (int i = 0; i < basis.ndim; ++i) {
    for (const SeparableTerm& term : f.a1[i].terms) {
      Operator a_op = promote(term.spatial, basis, "A1 term");
      Operator op = sym_product(a_op, basis.p[i], basis.interior_dim);
      op.m *= -q / (m * c);
      op.label = "H1:A.p";
      h1.terms.push_back(H1Term{std::move(op), term.profile, 1});
    }
  }

  // (Q^2 / 2 m c^2) A1_i^2; squaring a separable component needs a single
  // profile shape per component and a degree-<= 1 polynomial
  if (include_a2) {
    for (int i = 0; i < basis.ndim; ++i) {
      if (f.a1[i].terms.empty()) continue;
      if (f.a1[i].terms.size() != 1) {
        throw std::invalid_argument(
            "assemble_h1: A1^2 requires a single profile shape per component");
      }
      const SeparableTerm& term = f.a1[i].terms.front();
      if (term.spatial.degree() > 1) {
        throw std::invalid_argument("assemble_h1: A1^2 requires degree <= 1 components");
      }
      CoordPoly sq = term.spatial.times(term.spatial);
      Operator op = promote(sq, basis, "H1:A^2");
      op.m *= q * q / (2.0 * m * c * c);
      h1.terms.push_back(H1Term{std::move(op), term.profile, 2});
    }
  }

  // Q Phi1
  for (const SeparableTerm& term : f.phi1.terms) {
    Operator op = promote(term.spatial, basis, "H1:Phi1");
    op.m *= q;
    h1.terms.push_back(H1Term{std::move(op), term.profile, 1});
  }
  return h1;
}

Eigen::VectorXcd coefficient_rhs(const PerturbingHamiltonian& h1, const Basis& basis, double t,
                                 const Eigen::VectorXcd& c) {
  if (c.size() != basis.interior_dim) {
    throw std::invalid_argument("coefficient_rhs: coefficient vector must be interior sized");
  }
  return (-kI / basis.constants.hbar) * (interaction_matrix(h1, basis, t) * c);
}

Rk4Result integrate_coefficients_rk4(const PerturbingHamiltonian& h1, const Basis& basis,
                                     const Eigen::VectorXcd& c0, double T, double dt) {
  if (!(T > 0.0)) throw std::invalid_argument("integrate_coefficients_rk4: T must be positive");
  double cap = 0.01 / basis.omega_max();
  double w = h1.min_window();
  if (w > 0.0) cap = std::min(cap, w / 200.0);
  if (dt > cap * (1.0 + 1e-12)) {
    throw PolicyError("rk4_step_cap", "dt = " + std::to_string(dt) + " exceeds the cap " +
                                          std::to_string(cap));
  }
  long long steps = std::llround(T / dt);
  if (steps < 1) steps = 1;
  double h = T / static_cast<double>(steps);

  Rk4Result res;
  res.dt = h;
  res.c = c0;
  res.times.push_back(0.0);
  res.norms2.push_back(res.c.squaredNorm());
  for (long long j = 0; j < steps; ++j) {
    double t = j * h;
    Eigen::VectorXcd k1 = coefficient_rhs(h1, basis, t, res.c);
    Eigen::VectorXcd k2 = coefficient_rhs(h1, basis, t + 0.5 * h, res.c + 0.5 * h * k1);
    Eigen::VectorXcd k3 = coefficient_rhs(h1, basis, t + 0.5 * h, res.c + 0.5 * h * k2);
    Eigen::VectorXcd k4 = coefficient_rhs(h1, basis, t + h, res.c + h * k3);
    res.c += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    res.times.push_back((j + 1) * h);
    res.norms2.push_back(res.c.squaredNorm());
  }
  return res;
}

std::vector<double> euler_norm_demo(const PerturbingHamiltonian& h1, const Basis& basis, int k,
                                    double dt, int steps) {
  if (!basis.is_interior(k)) {
    throw std::invalid_argument("euler_norm_demo: initial state must be interior");
  }
  if (!(dt > 0.0) || steps < 1) throw std::invalid_argument("euler_norm_demo: bad step setup");
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(basis.interior_dim);
  c[k] = 1.0;
  std::vector<double> norms2{1.0};
  for (int j = 0; j < steps; ++j) {
    double t = j * dt;
    c = c + dt * coefficient_rhs(h1, basis, t, c);
    norms2.push_back(c.squaredNorm());
  }
  return norms2;
}

std::complex<double> first_order_amplitude(const PerturbingHamiltonian& h1, const Basis& basis,
                                           int n, int k, double T) {
  if (!basis.is_interior(n) || !basis.is_interior(k)) {
    throw std::invalid_argument("first_order_amplitude: indices must be interior");
  }
  if (!(T > 0.0)) throw std::invalid_argument("first_order_amplitude: T must be positive");
  const double hbar = basis.constants.hbar;
  const double omega_nk = (basis.energies[n] - basis.energies[k]) / hbar;

  struct Piece {
    std::complex<double> mel;
    const H1Term* term;
  };
  std::vector<Piece> pieces;
  for (const H1Term& term : h1.terms) {
    std::complex<double> mel = term.op.m(n, k);
    if (mel != 0.0) pieces.push_back(Piece{mel, &term});
  }
  if (pieces.empty()) return 0.0;

  ComplexIntegrand f = [&](double t, EndpointSide side) {
    std::complex<double> sum = 0.0;
    for (const Piece& p : pieces) {
      double s = (side == EndpointSide::interior)
                     ? term_value(*p.term, t)
                     : term_value_limit(*p.term, t, side == EndpointSide::lower);
      if (s != 0.0) sum += p.mel * s;
    }
    return sum * std::exp(kI * (omega_nk * t));
  };
  double osc = std::abs(omega_nk) + h1.max_abs_omega_d();
  std::complex<double> integral =
      integrate_piecewise(f, T, h1.breakpoints(T), h1.min_window(), osc);
  return (-kI / hbar) * integral;
}

double first_order_probability(const PerturbingHamiltonian& h1, const Basis& basis, int n, int k,
                               double T) {
  return std::norm(first_order_amplitude(h1, basis, n, k, T));
}

GaugeSensitivity gauge_sensitivity(const GaugeField& field, const GaugeFunction& f,
                                   const Basis& basis, int k, int n, double T, bool include_a2) {
  GaugeField transformed = gauge_transform(field, f, basis.constants);
  PerturbingHamiltonian ha = assemble_h1(field, basis, include_a2);
  PerturbingHamiltonian hb = assemble_h1(transformed, basis, include_a2);
  GaugeSensitivity gs;
  gs.p_original = first_order_probability(ha, basis, n, k, T);
  gs.p_transformed = first_order_probability(hb, basis, n, k, T);
  gs.rel_diff = std::abs(gs.p_original - gs.p_transformed) /
                std::max({gs.p_original, gs.p_transformed, 1e-300});
  return gs;
}

}  // namespace qdyn
