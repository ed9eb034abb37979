#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>

#include "helpers.hpp"
#include "qdyn/observable.hpp"
#include "qdyn/state.hpp"

using namespace qdyn;

namespace {

double interior_gap(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, int d) {
  return (a.topLeftCorner(d, d) - b.topLeftCorner(d, d)).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("catalog specs build the canonical operators") {
  Constants c;

  for (auto kind : {BasisKind::ho1d, BasisKind::ho2d}) {
    Basis basis = build_basis(kind, 1.0, 8, c);
    Operator energy = build_observable(energy_spec(basis), basis);
    CHECK(interior_gap(energy.m, basis.h0.m, basis.interior_dim) <= 1e-12);
  }

  // nonunit constants exercise the coefficients
  Constants c2;
  c2.hbar = 2.0;
  c2.mass = 0.5;
  Basis scaled = build_basis(BasisKind::ho1d, 1.7, 8, c2);
  Operator energy2 = build_observable(energy_spec(scaled), scaled);
  CHECK(interior_gap(energy2.m, scaled.h0.m, scaled.interior_dim) <= 1e-12);

  Basis b2 = build_basis(BasisKind::ho2d, 1.0, 8, c);
  Operator lz = build_observable(lz_spec(c), b2);
  CHECK(interior_gap(lz.m, b2.lz->m, b2.interior_dim) <= 1e-10);

  Operator lz2 = lz_squared_operator(b2);
  CHECK(interior_gap(lz2.m, b2.lz->m * b2.lz->m, b2.dim) <= 1e-12);

  Operator qx = build_observable(coordinate_spec(PhaseVar::qx, 2), b2);
  CHECK(interior_gap(qx.m, b2.q[0].m, b2.interior_dim) <= 1e-14);
}

TEST_CASE("spec validation enforces the degree cap and dimensionality") {
  ObservableSpec bad;
  bad.name = "cubic";
  bad.ndim = 1;
  bad.terms.push_back({1.0, {PhaseVar::qx, PhaseVar::qx, PhaseVar::qx}});
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  ObservableSpec wrong_dim;
  wrong_dim.name = "qy1d";
  wrong_dim.ndim = 1;
  wrong_dim.terms.push_back({1.0, {PhaseVar::qy}});
  CHECK_THROWS_AS(wrong_dim.validate(), std::invalid_argument);
}

TEST_CASE("invariance residual separates invariants from coordinates") {
  Constants c;
  Basis basis = build_basis(BasisKind::ho2d, 1.0, 10, c);

  CHECK(invariance_residual(build_observable(energy_spec(basis), basis), basis) <= 1e-10);
  CHECK(invariance_residual(build_observable(lz_spec(c), basis), basis) <= 1e-10);
  CHECK(invariance_residual(lz_squared_operator(basis), basis) <= 1e-10);

  double qx_res = invariance_residual(build_observable(coordinate_spec(PhaseVar::qx, 2), basis),
                                      basis);
  CHECK(qx_res >= 1e-2);

  CHECK(verify_unperturbed_invariance(build_observable(energy_spec(basis), basis), basis));
  CHECK_FALSE(
      verify_unperturbed_invariance(build_observable(coordinate_spec(PhaseVar::qx, 2), basis),
                                    basis));
}

TEST_CASE("velocity derivatives match their built matrices") {
  Constants c;
  Basis basis = build_basis(BasisKind::ho2d, 1.0, 8, c);
  int d = basis.interior_dim;

  // d(energy)/dvx = m vx
  Operator denergy = build_observable(dv_derivative(energy_spec(basis), 0), basis);
  CHECK(interior_gap(denergy.m, c.mass * basis.v[0].m, d) <= 1e-12);

  // d(lz)/dvx = -m qy, d(lz)/dvy = m qx
  Operator dlzx = build_observable(dv_derivative(lz_spec(c), 0), basis);
  Operator dlzy = build_observable(dv_derivative(lz_spec(c), 1), basis);
  CHECK(interior_gap(dlzx.m, -c.mass * basis.q[1].m, d) <= 1e-12);
  CHECK(interior_gap(dlzy.m, c.mass * basis.q[0].m, d) <= 1e-12);

  // d(qx)/dvx = 0
  ObservableSpec dq = dv_derivative(coordinate_spec(PhaseVar::qx, 2), 0);
  CHECK(build_observable(dq, basis).m.cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("monomial basis spans degree two and round-trips specs") {
  PhaseMonomialBasis mb1(1);
  CHECK(mb1.size() == 6);  // 1, q, v, q^2, qv, v^2
  PhaseMonomialBasis mb2(2);
  CHECK(mb2.size() == 15);

  for (int i = 0; i < mb2.size(); ++i) {
    CHECK(mb2.index(mb2.monomials[i]) == i);
  }
  CHECK(mb2.index({3, 0, 0, 0}) == -1);

  Constants c;
  Basis basis = build_basis(BasisKind::ho2d, 1.0, 8, c);
  ObservableSpec lz = lz_spec(c);
  Eigen::VectorXd coef = spec_coefficients(lz, mb2);
  ObservableSpec back = spec_from_coefficients(coef, mb2, "roundtrip");
  Operator a = build_observable(lz, basis);
  Operator b = build_observable(back, basis);
  CHECK(interior_gap(a.m, b.m, basis.interior_dim) <= 1e-13);
}

TEST_CASE("flow matrix is the exact unperturbed transport") {
  const double omega = 1.7;
  PhaseMonomialBasis mb(2);

  Eigen::MatrixXd g0 = flow_matrix(mb, omega, 0.0);
  CHECK((g0 - Eigen::MatrixXd::Identity(mb.size(), mb.size())).cwiseAbs().maxCoeff() <= 1e-14);

  // group property G(a) G(b) = G(a + b)
  Eigen::MatrixXd ga = flow_matrix(mb, omega, 0.31);
  Eigen::MatrixXd gb = flow_matrix(mb, omega, 1.27);
  Eigen::MatrixXd gab = flow_matrix(mb, omega, 1.58);
  CHECK((ga * gb - gab).cwiseAbs().maxCoeff() <= 1e-12);

  // invariants have fixed coefficient vectors
  Constants c;
  Basis basis = build_basis(BasisKind::ho2d, omega, 8, c);
  Eigen::VectorXd ce = spec_coefficients(energy_spec(basis), mb);
  Eigen::VectorXd cl = spec_coefficients(lz_spec(c), mb);
  CHECK((flow_matrix(mb, omega, 0.73) * ce - ce).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((flow_matrix(mb, omega, 0.73) * cl - cl).cwiseAbs().maxCoeff() <= 1e-12);

  // coordinates rotate: qx(tau) = qx cos + vx sin / omega
  Eigen::VectorXd cq = spec_coefficients(coordinate_spec(PhaseVar::qx, 2), mb);
  Eigen::VectorXd cv = spec_coefficients(coordinate_spec(PhaseVar::vx, 2), mb);
  double tau = 0.42;
  Eigen::VectorXd want = std::cos(omega * tau) * cq + (std::sin(omega * tau) / omega) * cv;
  CHECK((flow_matrix(mb, omega, tau) * cq - want).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("flowed specs equal the phase-conjugated matrices") {
  Constants c;
  const double omega = 1.0;
  Basis basis = build_basis(BasisKind::ho1d, omega, 12, c);
  PhaseMonomialBasis mb(1);
  int d = basis.interior_dim;

  // L(tau) from the flow versus e^{i H0 tau / hbar} L e^{-i H0 tau / hbar},
  // evaluated on the interior block where H0 is exactly diagonal.
  for (double tau : {0.37, 1.7}) {
    for (const ObservableSpec& spec :
         {coordinate_spec(PhaseVar::qx, 1), coordinate_spec(PhaseVar::vx, 1)}) {
      Eigen::VectorXd c0 = spec_coefficients(spec, mb);
      ObservableSpec flowed = spec_from_coefficients(flow_matrix(mb, omega, tau) * c0, mb, "f");
      Eigen::MatrixXcd lhs = build_observable(flowed, basis).m;

      Eigen::MatrixXcd l0 = build_observable(spec, basis).m;
      Eigen::MatrixXcd rhs = l0;
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          double w = (basis.energies[i] - basis.energies[j]) / c.hbar;
          rhs(i, j) = l0(i, j) * std::exp(std::complex<double>(0.0, w * tau));
        }
      }
      CHECK(interior_gap(lhs, rhs, d) <= 1e-10);
    }
  }
}
