#include "qdyn/quasicanon.hpp"

#include <cmath>
#include <stdexcept>

#include "qdyn/errors.hpp"
#include "qdyn/polynomial.hpp"

namespace qdyn {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

Eigen::MatrixXcd symm(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return 0.5 * (a * b + b * a);
}

// Forward-evolved unperturbed state, psi(t) = e^{-i H0 t / hbar} psi0.
Eigen::VectorXcd evolved_state(const Basis& basis, const Eigen::VectorXcd& psi0, double t) {
  Eigen::VectorXcd psi(psi0.size());
  for (int n = 0; n < psi0.size(); ++n) {
    psi[n] = std::exp(-kI * (basis.energies[n] * t / basis.constants.hbar)) * psi0[n];
  }
  return psi;
}

double rate_expectation(const RateOperator& rate, const Eigen::VectorXcd& psi, double t) {
  double sum = 0.0;
  for (const RateTerm& term : rate.electric) {
    double s = term.profile.value(t);
    if (s != 0.0) sum += s * psi.dot(term.op * psi).real();
  }
  for (const RateTerm& term : rate.magnetic) {
    double s = term.profile.value(t);
    if (s != 0.0) sum += s * psi.dot(term.op * psi).real();
  }
  return sum;
}

RateOperator rate_operator_unchecked(const ObservableSpec& spec, const PhysicalFields& fields,
                                     const Basis& basis) {
  spec.validate();
  if (spec.ndim != basis.ndim) {
    throw std::invalid_argument("rate_operator: spec/basis ndim mismatch for " + spec.name);
  }
  const double q = basis.constants.charge;
  const double m = basis.constants.mass;
  const double c = basis.constants.c_light;

  RateOperator rate;
  rate.dim = basis.dim;
  rate.impulsive_dropped = fields.impulsive_e1;

  std::vector<Operator> dl;  // dL/dv_i, built once
  for (int i = 0; i < basis.ndim; ++i) {
    dl.push_back(build_observable(dv_derivative(spec, i), basis));
  }

  // (Q/m) (dL/dv_i) * E1_i
  for (int i = 0; i < basis.ndim; ++i) {
    if (dl[i].m.isZero(0.0)) continue;
    for (const SeparableTerm& term : fields.e1[i].terms) {
      Operator e_op = promote(term.spatial, basis, "E1 term");
      Eigen::MatrixXcd op = (q / m) * symm(dl[i].m, e_op.m);
      rate.electric.push_back(RateTerm{std::move(op), term.profile});
    }
  }

  // (Q/mc) eps_ijz ((dL/dv_i) * B1_z) * v_j, left associated
  if (basis.ndim == 2) {
    for (const SeparableTerm& term : fields.b1z.terms) {
      Operator b_op = promote(term.spatial, basis, "B1 term");
      Eigen::MatrixXcd op =
          (q / (m * c)) * (symm(symm(dl[0].m, b_op.m), basis.v[1].m) -
                           symm(symm(dl[1].m, b_op.m), basis.v[0].m));
      rate.magnetic.push_back(RateTerm{std::move(op), term.profile});
    }
  }
  return rate;
}

double fields_min_window(const PhysicalFields& fields) {
  double w = 0.0;
  auto scan = [&](const FieldComponent& comp) {
    for (const SeparableTerm& t : comp.terms) {
      if (t.profile.has_window()) w = (w == 0.0) ? t.profile.t1 : std::min(w, t.profile.t1);
    }
  };
  for (const FieldComponent& e : fields.e1) scan(e);
  scan(fields.b1z);
  return w;
}

}  // namespace

Eigen::MatrixXcd RateOperator::at(double t) const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const RateTerm& term : electric) {
    double s = term.profile.value(t);
    if (s != 0.0) m += s * term.op;
  }
  for (const RateTerm& term : magnetic) {
    double s = term.profile.value(t);
    if (s != 0.0) m += s * term.op;
  }
  return m;
}

double RateOperator::min_window() const {
  double w = 0.0;
  auto scan = [&](const std::vector<RateTerm>& terms) {
    for (const RateTerm& t : terms) {
      if (t.profile.has_window()) w = (w == 0.0) ? t.profile.t1 : std::min(w, t.profile.t1);
    }
  };
  scan(electric);
  scan(magnetic);
  return w;
}

RateOperator rate_operator(const ObservableSpec& spec, const PhysicalFields& fields,
                           const Basis& basis) {
  Operator l = build_observable(spec, basis);
  if (!verify_unperturbed_invariance(l, basis)) {
    throw std::invalid_argument("rate_operator: " + spec.name +
                                " is not an unperturbed motion invariant (residual = " +
                                std::to_string(invariance_residual(l, basis)) + ")");
  }
  return rate_operator_unchecked(spec, fields, basis);
}

Trajectory evolve_expectation(const ObservableSpec& spec, const PhysicalFields& fields,
                              const Basis& basis, const State& psi0, double T, double dt,
                              StepRule rule) {
  spec.validate();
  if (!(T > 0.0)) throw std::invalid_argument("evolve_expectation: T must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("evolve_expectation: dt must be positive");
  double w = fields_min_window(fields);
  if (w > 0.0 && dt > (w / 100.0) * (1.0 + 1e-12)) {
    throw PolicyError("quasicanon_step_cap", "dt = " + std::to_string(dt) +
                                                 " exceeds t1/100 = " + std::to_string(w / 100.0));
  }
  long long steps = std::llround(T / dt);
  if (steps < 1) steps = 1;
  const double h = T / static_cast<double>(steps);
  const double omega = basis.omega0;

  PhaseMonomialBasis mb(basis.ndim);
  Eigen::VectorXd c0 = spec_coefficients(spec, mb);

  // The observable is flow invariant when the unperturbed Heisenberg flow
  // fixes its coefficient vector; checked at two incommensurate times.
  bool invariant = true;
  for (double tau : {0.37 / omega, 1.7 / omega}) {
    Eigen::VectorXd moved = flow_matrix(mb, omega, tau) * c0;
    if ((moved - c0).norm() > 1e-12 * std::max(1.0, c0.norm())) {
      invariant = false;
      break;
    }
  }

  Trajectory traj;
  traj.dt = h;
  traj.used_invariant_path = invariant;
  traj.times.reserve(steps + 1);
  traj.values.reserve(steps + 1);

  if (invariant) {
    // Stepped rate accumulation: the transported observable equals the
    // observable itself, so each step adds the rate expectation.
    RateOperator rate = rate_operator_unchecked(spec, fields, basis);
    Operator l = build_observable(spec, basis);
    double value = real_expectation(l, psi0);
    traj.times.push_back(0.0);
    traj.values.push_back(value);
    for (long long j = 0; j < steps; ++j) {
      double t_eval = (rule == StepRule::left_endpoint) ? j * h : (j + 0.5) * h;
      Eigen::VectorXcd psi = evolved_state(basis, psi0.coeffs, t_eval);
      value += rate_expectation(rate, psi, t_eval) * h;
      traj.times.push_back((j + 1) * h);
      traj.values.push_back(value);
    }
    return traj;
  }

  // General first-order scheme: per-monomial rates, accumulated change
  // transported by the exact unperturbed flow of the coefficient vector.
  std::vector<RateOperator> mono_rates;
  Eigen::VectorXd o0(mb.size());
  for (int a = 0; a < mb.size(); ++a) {
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(mb.size());
    unit[a] = 1.0;
    ObservableSpec mono = spec_from_coefficients(unit, mb, "monomial");
    mono_rates.push_back(rate_operator_unchecked(mono, fields, basis));
    o0[a] = real_expectation(build_observable(mono, basis), psi0);
  }
  Eigen::MatrixXd g_step_t = flow_matrix(mb, omega, h).transpose();
  Eigen::MatrixXd g_half_t = flow_matrix(mb, omega, 0.5 * h).transpose();

  Eigen::VectorXd acc = Eigen::VectorXd::Zero(mb.size());
  traj.times.push_back(0.0);
  traj.values.push_back(c0.dot(o0));
  for (long long j = 0; j < steps; ++j) {
    double t_now = static_cast<double>(j + 1) * h;
    Eigen::VectorXd r(mb.size());
    if (rule == StepRule::left_endpoint) {
      double t_eval = j * h;
      Eigen::VectorXcd psi = evolved_state(basis, psi0.coeffs, t_eval);
      for (int a = 0; a < mb.size(); ++a) r[a] = rate_expectation(mono_rates[a], psi, t_eval);
      acc = g_step_t * (acc + h * r);
    } else {
      double t_eval = (j + 0.5) * h;
      Eigen::VectorXcd psi = evolved_state(basis, psi0.coeffs, t_eval);
      for (int a = 0; a < mb.size(); ++a) r[a] = rate_expectation(mono_rates[a], psi, t_eval);
      acc = g_step_t * acc + g_half_t * (h * r);
    }
    Eigen::VectorXd c_t = flow_matrix(mb, omega, t_now) * c0;
    traj.times.push_back(t_now);
    traj.values.push_back(c_t.dot(o0) + c0.dot(acc));
  }
  return traj;
}

double poisson_form_residual(const ObservableSpec& spec, const GaugeField& field,
                             const Basis& basis, double t) {
  spec.validate();
  GaugeField f = field;
  f.canonicalize();
  f.validate();
  PhysicalFields fields = physical_fields(f, basis.constants);
  Eigen::MatrixXcd side_field = rate_operator_unchecked(spec, fields, basis).at(t);

  const double q = basis.constants.charge;
  const double c = basis.constants.c_light;
  const std::complex<double> ih = kI * basis.constants.hbar;
  Eigen::MatrixXcd l = build_observable(spec, basis).m;
  auto bracket = [&](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return Eigen::MatrixXcd((a * b - b * a) / ih);
  };

  Eigen::MatrixXcd side_bracket = q * bracket(l, f.phi1.value_matrix(t, basis));
  for (int i = 0; i < basis.ndim; ++i) {
    Eigen::MatrixXcd a_t = f.a1[i].value_matrix(t, basis);
    Eigen::MatrixXcd dadt = f.a1[i].time_derivative_regular().value_matrix(t, basis);
    Eigen::MatrixXcd l_qi = bracket(l, basis.q[i].m);
    side_bracket += (q / c) * symm(l_qi, dadt);
    side_bracket += (q / c) * (symm(l_qi, bracket(a_t, basis.h0.m)) -
                               symm(bracket(l, a_t), bracket(basis.q[i].m, basis.h0.m)));
  }

  double denom = 1.0 + interior_max_abs(side_field, basis.interior_dim);
  return interior_max_abs(side_bracket - side_field, basis.interior_dim) / denom;
}

}  // namespace qdyn
