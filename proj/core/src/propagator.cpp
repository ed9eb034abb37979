#include "qdyn/propagator.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <stdexcept>

#include "qdyn/errors.hpp"

namespace qdyn {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

std::vector<double> profile_signature(const PerturbingHamiltonian& h1, double t) {
  std::vector<double> sig;
  sig.reserve(h1.terms.size());
  for (const H1Term& term : h1.terms) {
    double s = term.profile.value(t);
    sig.push_back(term.power == 2 ? s * s : s);
  }
  return sig;
}

void check_hermitian_sample(const Eigen::MatrixXcd& h) {
  double scale = h.cwiseAbs().maxCoeff();
  double dev = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (dev > 1e-12 * std::max(scale, 1e-300)) {
    throw PolicyError("propagator_hermiticity", "sampled H(t) is not hermitian");
  }
}

}  // namespace

PropagationResult propagate(const PerturbingHamiltonian& h1, const Basis& basis,
                            const Eigen::VectorXcd& psi0, double T, double dt,
                            PropagatorMethod method, bool record_snapshots) {
  if (psi0.size() != basis.dim) throw std::invalid_argument("propagate: psi0 must be full sized");
  if (!(T > 0.0)) throw std::invalid_argument("propagate: T must be positive");
  double cap = 0.05 / basis.omega_max();
  double w = h1.min_window();
  if (w > 0.0) cap = std::min(cap, w / 200.0);
  if (dt > cap * (1.0 + 1e-12)) {
    throw PolicyError("propagator_step_cap", "dt = " + std::to_string(dt) +
                                                 " exceeds the cap " + std::to_string(cap));
  }
  long long steps = std::llround(T / dt);
  if (steps < 1) steps = 1;
  const double h = T / static_cast<double>(steps);

  PropagationResult res;
  res.dt = h;
  res.psi = psi0;
  res.times.push_back(0.0);
  res.norms2.push_back(res.psi.squaredNorm());
  if (record_snapshots) res.snapshots.push_back(res.psi);

  // Factorizations are rebuilt only when the sampled profile values change,
  // so piecewise-constant pulses cost a handful of factorizations total.
  std::vector<double> cached_sig;
  bool have_cache = false;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
  Eigen::MatrixXcd rhs_mat;
  Eigen::MatrixXcd expm;

  for (long long j = 0; j < steps; ++j) {
    double t_mid = (static_cast<double>(j) + 0.5) * h;
    std::vector<double> sig = profile_signature(h1, t_mid);
    if (!have_cache || sig != cached_sig) {
      Eigen::MatrixXcd ham = basis.h0.m + h1.at(t_mid);
      check_hermitian_sample(ham);
      if (method == PropagatorMethod::crank_nicolson) {
        std::complex<double> z = kI * (h / (2.0 * basis.constants.hbar));
        Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(basis.dim, basis.dim);
        lu.compute(eye + z * ham);
        rhs_mat = eye - z * ham;
      } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ham);
        if (es.info() != Eigen::Success) {
          throw PolicyError("propagator_eigensolve", "eigendecomposition failed");
        }
        Eigen::VectorXcd phases(basis.dim);
        for (int n = 0; n < basis.dim; ++n) {
          phases[n] = std::exp(-kI * (es.eigenvalues()[n] * h / basis.constants.hbar));
        }
        expm = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
      }
      cached_sig = std::move(sig);
      have_cache = true;
    }
    if (method == PropagatorMethod::crank_nicolson) {
      res.psi = lu.solve(rhs_mat * res.psi);
    } else {
      res.psi = expm * res.psi;
    }
    res.times.push_back((j + 1) * h);
    res.norms2.push_back(res.psi.squaredNorm());
    if (record_snapshots) res.snapshots.push_back(res.psi);
  }

  double budget = 1e-10 * std::max(1.0, static_cast<double>(steps) / 1000.0);
  if (std::abs(res.norms2.back() - res.norms2.front()) > budget) {
    throw PolicyError("propagator_unitarity", "norm drift exceeded the budget");
  }
  return res;
}

double exact_transition(const PropagationResult& result, int n) {
  if (n < 0 || n >= result.psi.size()) {
    throw std::invalid_argument("exact_transition: index out of range");
  }
  return std::norm(result.psi[n]);
}

double exact_transition_restored(const PropagationResult& result, const GaugeFunction& f,
                                 const Basis& basis, double T, int n) {
  if (n < 0 || n >= result.psi.size()) {
    throw std::invalid_argument("exact_transition_restored: index out of range");
  }
  // psi was propagated in the transformed gauge; undo the residual phase
  // e^{i Q f(x, T) / hbar c} before projecting.
  Eigen::MatrixXcd fmat = f.f.value_matrix(T, basis);
  check_hermitian_sample(fmat);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(fmat);
  if (es.info() != Eigen::Success) {
    throw PolicyError("gauge_restore_eigensolve", "eigendecomposition failed");
  }
  double scale = basis.constants.charge / (basis.constants.hbar * basis.constants.c_light);
  Eigen::VectorXcd phases(basis.dim);
  for (int i = 0; i < basis.dim; ++i) {
    phases[i] = std::exp(-kI * (scale * es.eigenvalues()[i]));
  }
  Eigen::VectorXcd restored =
      es.eigenvectors() * (phases.asDiagonal() * (es.eigenvectors().adjoint() * result.psi));
  return std::norm(restored[n]);
}

std::vector<double> exact_expectation_series(const PropagationResult& result,
                                             const Operator& op) {
  if (result.snapshots.empty()) {
    throw std::invalid_argument("exact_expectation_series: run was propagated without snapshots");
  }
  std::vector<double> out;
  out.reserve(result.snapshots.size());
  for (const Eigen::VectorXcd& psi : result.snapshots) {
    out.push_back(psi.dot(op.m * psi).real());
  }
  return out;
}

double forced_oscillator_reference(double e0, const TimeProfile& profile, const Basis& basis,
                                   double T) {
  if (basis.kind != BasisKind::ho1d) {
    throw std::invalid_argument("forced_oscillator_reference: needs the 1D oscillator");
  }
  if (!(T > 0.0)) throw std::invalid_argument("forced_oscillator_reference: T must be positive");
  const double w0 = basis.omega0;
  // E(w) = int_0^tau e^{i w t} dt with the resonance limit built in.
  auto ew = [](double w, double tau) -> std::complex<double> {
    if (w == 0.0) return tau;
    return (std::exp(kI * (w * tau)) - 1.0) / (kI * w);
  };
  double tau = profile.has_window() ? std::min(T, profile.t1) : T;
  std::complex<double> integral;
  switch (profile.kind) {
    case ProfileKind::constant:
    case ProfileKind::rect: integral = ew(w0, tau); break;
    case ProfileKind::sine:
      integral = (ew(w0 + profile.omega_d, tau) - ew(w0 - profile.omega_d, tau)) / (2.0 * kI);
      break;
    case ProfileKind::cosine:
      integral = (ew(w0 + profile.omega_d, tau) + ew(w0 - profile.omega_d, tau)) / 2.0;
      break;
    default:
      throw std::invalid_argument(
          "forced_oscillator_reference: no closed form for profile " + profile.describe());
  }
  integral *= profile.amplitude;
  const Constants& c = basis.constants;
  double pref = c.charge * c.charge * e0 * e0 / (2.0 * c.mass * c.hbar * w0);
  return pref * std::norm(integral);
}

}  // namespace qdyn
