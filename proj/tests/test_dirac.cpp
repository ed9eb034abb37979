#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <complex>

#include "helpers.hpp"
#include "qdyn/dirac.hpp"
#include "qdyn/errors.hpp"

using namespace qdyn;
using qtest::kPi;

namespace {

const std::complex<double> I(0.0, 1.0);

Eigen::MatrixXcd h1_value(const PerturbingHamiltonian& h1, double t) { return h1.at(t); }

double interior_rel_err(const Eigen::MatrixXcd& got, const Eigen::MatrixXcd& want, int d) {
  double scale = want.topLeftCorner(d, d).cwiseAbs().maxCoeff();
  return (got.topLeftCorner(d, d) - want.topLeftCorner(d, d)).cwiseAbs().maxCoeff() /
         (scale > 0.0 ? scale : 1.0);
}

}  // namespace

TEST_CASE("magnetic pulse assembles to the angular-momentum coupling") {
  Constants c;
  Basis basis = build_basis(BasisKind::ho2d, 1.0, 10, c);
  const double eps = 1e-2;
  const double t1 = 5.0;
  GaugeField field = qtest::magnetic_pulse(eps, t1);

  PerturbingHamiltonian h1 = assemble_h1(field, basis, false);
  REQUIRE(h1.dim == basis.dim);
  REQUIRE(!h1.terms.empty());
  for (const auto& term : h1.terms) CHECK(term.power == 1);

  // -(Q eps / 2 m c) T(t) Lz, with T(t) the rect window
  double coef = -c.charge * eps / (2.0 * c.mass * c.c_light);
  Eigen::MatrixXcd want = coef * basis.lz->m;
  CHECK(interior_rel_err(h1_value(h1, 2.5), want, basis.interior_dim) <= 1e-12);
  CHECK(h1_value(h1, 7.0).cwiseAbs().maxCoeff() <= 1e-15);

  // the linear coupling is diagonal, so it cannot drive transitions
  Eigen::MatrixXcd at = h1_value(h1, 2.5);
  for (int i = 0; i < basis.interior_dim; ++i) {
    for (int j = 0; j < basis.interior_dim; ++j) {
      if (i != j) CHECK(std::abs(at(i, j)) <= 1e-14);
    }
  }
  CHECK(h1.min_window() == t1);
}

TEST_CASE("squared vector potential term is the quadratic trap correction") {
  Constants c;
  Basis basis = build_basis(BasisKind::ho2d, 1.0, 8, c);
  const double eps = 1e-2;
  const double t1 = 5.0;
  GaugeField field = qtest::magnetic_pulse(eps, t1);

  PerturbingHamiltonian h1 = assemble_h1(field, basis, true);
  Eigen::MatrixXcd quad = Eigen::MatrixXcd::Zero(basis.dim, basis.dim);
  for (const auto& term : h1.terms) {
    if (term.power == 2) {
      double w = term.profile.value(2.5);
      quad += term.op.m * (w * w);
    }
  }
  // (Q^2 eps^2 / 8 m c^2) (x^2 + y^2) inside the window
  double coef = c.charge * c.charge * eps * eps / (8.0 * c.mass * c.c_light * c.c_light);
  Eigen::MatrixXcd want =
      coef * (basis.q[0].m * basis.q[0].m + basis.q[1].m * basis.q[1].m);
  CHECK(interior_rel_err(quad, want, basis.interior_dim) <= 1e-12);
}

TEST_CASE("squared vector potential requires simple components") {
  Constants c;
  Basis basis = build_basis(BasisKind::ho1d, 1.0, 8, c);
  GaugeField field = GaugeField::empty(1);
  // two different profile shapes on one component: A1^2 is not separable
  field.a1[0].terms.push_back({CoordPoly::constant(1, 1.0), TimeProfile::make_rect(1.0, 1.0)});
  field.a1[0].terms.push_back({CoordPoly::constant(1, 1.0), TimeProfile::make_ramp(1.0, 2.0)});
  field.canonicalize();
  CHECK_THROWS_AS((void)assemble_h1(field, basis, true), std::invalid_argument);
  CHECK_NOTHROW((void)assemble_h1(field, basis, false));

  GaugeField quad_a = GaugeField::empty(1);
  quad_a.a1[0].terms.push_back({CoordPoly::monomial(1, 1.0, 2), TimeProfile::make_rect(1.0, 1.0)});
  quad_a.canonicalize();
  CHECK_THROWS_AS((void)assemble_h1(quad_a, basis, true), std::invalid_argument);
}

TEST_CASE("first-order probability reproduces the rect-pulse closed form") {
  Constants c;
  Basis basis = build_basis(BasisKind::ho1d, 1.0, 12, c);
  const double e0 = 1e-2;
  const double t1 = kPi;
  GaugeField field = qtest::uniform_e_scalar(e0, t1);
  PerturbingHamiltonian h1 = assemble_h1(field, basis, false);

  // |a|^2 = (Q^2 e0^2 / 2 m hbar w) |(e^{i w t1} - 1)/(i w)|^2 = 2e-4 at w = 1, t1 = pi
  double p_t1 = first_order_probability(h1, basis, 1, 0, t1);
  double p_2t1 = first_order_probability(h1, basis, 1, 0, 2.0 * t1);
  CHECK(p_t1 == doctest::Approx(2e-4).epsilon(1e-8));
  CHECK(p_2t1 == doctest::Approx(2e-4).epsilon(1e-8));  // nothing accrues after the pulse

  // parity: 0 -> 2 is forbidden at first order for a linear coupling
  CHECK(first_order_probability(h1, basis, 2, 0, t1) <= 1e-25);

  std::complex<double> a = first_order_amplitude(h1, basis, 1, 0, t1);
  std::complex<double> want =
      -(I / c.hbar) * (-c.charge * e0 * basis.q[0].m(1, 0).real()) *
      ((std::exp(I * t1) - 1.0) / I);
  CHECK(std::abs(a - want) <= 1e-9 * std::abs(want));
}

TEST_CASE("first-order probability reproduces the resonant-drive closed form") {
  Constants c;
  Basis basis = build_basis(BasisKind::ho1d, 1.0, 12, c);
  const double e0 = 1e-2;
  const double T = 4.0 * kPi;
  GaugeField field = GaugeField::empty(1);
  field.phi1.terms.push_back(
      {CoordPoly::monomial(1, -e0, 1), TimeProfile::make_sine(1.0, 1.0, T)});
  field.canonicalize();
  PerturbingHamiltonian h1 = assemble_h1(field, basis, false);

  // int_0^T sin(t) e^{it} dt = -T/(2i) + (e^{2iT}-1)/(4 i^2) -> 2 pi i at T = 4 pi
  double x01 = basis.q[0].m(0, 1).real();
  double want = std::pow(c.charge * e0 * x01 / c.hbar, 2) * 4.0 * kPi * kPi;
  double got = first_order_probability(h1, basis, 1, 0, T);
  CHECK(got == doctest::Approx(want).epsilon(1e-7));
}

TEST_CASE("rk4 coefficients converge to the first-order amplitude as the field weakens") {
  Constants c;
  Basis basis = build_basis(BasisKind::ho1d, 1.0, 10, c);
  const double t1 = 2.0;
  const double T = 2.0;

  auto amp_gap = [&](double eps) {
    GaugeField field = GaugeField::empty(1);
    // x + 0.3 x^2 coupling breaks parity so the second order term is present
    field.phi1.terms.push_back({CoordPoly::monomial(1, -eps, 1), TimeProfile::make_rect(1.0, t1)});
    field.phi1.terms.push_back(
        {CoordPoly::monomial(1, -0.3 * eps, 2), TimeProfile::make_rect(1.0, t1)});
    field.canonicalize();
    PerturbingHamiltonian h1 = assemble_h1(field, basis, false);

    Eigen::VectorXcd c0 = Eigen::VectorXcd::Zero(basis.interior_dim);
    c0[0] = 1.0;
    Rk4Result rk4 = integrate_coefficients_rk4(h1, basis, c0, T, 5e-4);
    std::complex<double> a1 = first_order_amplitude(h1, basis, 1, 0, T);
    return std::abs(rk4.c[1] - a1);
  };

  double gap_full = amp_gap(1e-2);
  double gap_half = amp_gap(5e-3);
  CHECK(gap_full > 1e-12);  // the exact answer really does move beyond first order
  CHECK(gap_full / gap_half == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("rk4 norm drift stays tiny while euler inflates the norm") {
  Constants c;
  Basis basis = build_basis(BasisKind::ho2d, 1.0, 10, c);
  GaugeField field = qtest::magnetic_pulse(1e-2, 5.0);
  PerturbingHamiltonian h1 = assemble_h1(field, basis, false);
  int k = basis.index_of(1, 1);

  const double dt = 0.01;
  std::vector<double> norms = euler_norm_demo(h1, basis, k, dt, 50);
  REQUIRE(norms.size() == 51);
  CHECK(norms[0] == 1.0);

  // first step: |C|^2 = 1 + ((H1)_kk dt / hbar)^2 exactly
  double hkk = h1.at(0.0)(k, k).real();
  double expected = 1.0 + std::pow(hkk * dt / c.hbar, 2);
  CHECK(norms[1] == doctest::Approx(expected).epsilon(1e-14));
  CHECK(hkk != 0.0);
  for (std::size_t j = 1; j < norms.size(); ++j) CHECK(norms[j] > norms[j - 1]);

  Eigen::VectorXcd c0 = Eigen::VectorXcd::Zero(basis.interior_dim);
  c0[k] = 1.0;
  Rk4Result rk4 = integrate_coefficients_rk4(h1, basis, c0, 5.0, 1e-3);
  double drift = 0.0;
  for (double n2 : rk4.norms2) drift = std::max(drift, std::abs(n2 - 1.0));
  CHECK(drift <= 1e-8);
}

TEST_CASE("a pure gauge potential still drives first-order amplitudes") {
  Constants c;
  Basis basis = build_basis(BasisKind::ho1d, 1.0, 10, c);
  // A1 = grad(x rect(t)): zero physical field away from the switching edges
  GaugeField field = GaugeField::empty(1);
  field.a1[0].terms.push_back({CoordPoly::constant(1, 1e-2), TimeProfile::make_rect(1.0, 1.0)});
  field.canonicalize();

  PhysicalFields pf = physical_fields(field, c);
  CHECK(pf.e1[0].is_zero());
  CHECK(pf.impulsive_e1);

  PerturbingHamiltonian h1 = assemble_h1(field, basis, false);
  double p = first_order_probability(h1, basis, 1, 0, 2.0);
  CHECK(p > 1e-9);  // the standard formula reacts to the gauge, not the field
}

TEST_CASE("gauge sensitivity quantifies the discrepancy between gauges") {
  Constants c;
  Basis basis = build_basis(BasisKind::ho1d, 1.0, 12, c);
  const double e0 = 1e-2;
  const double t1 = kPi;
  GaugeField scalar = qtest::uniform_e_scalar(e0, t1);
  GaugeFunction f = qtest::uniform_e_gauge_fn(e0, t1, c);

  GaugeSensitivity gs = gauge_sensitivity(scalar, f, basis, 0, 1, 2.0 * t1, false);
  CHECK(gs.p_original == doctest::Approx(2e-4).epsilon(1e-7));
  CHECK(gs.p_transformed > 1e-6);
  CHECK(gs.rel_diff >= 0.10);
}

TEST_CASE("step-size policy rejects coarse rk4 grids") {
  Constants c;
  Basis basis = build_basis(BasisKind::ho1d, 1.0, 12, c);
  GaugeField field = qtest::uniform_e_scalar(1e-2, kPi);
  PerturbingHamiltonian h1 = assemble_h1(field, basis, false);
  Eigen::VectorXcd c0 = Eigen::VectorXcd::Zero(basis.interior_dim);
  c0[0] = 1.0;
  CHECK_THROWS_AS((void)integrate_coefficients_rk4(h1, basis, c0, 2.0 * kPi, 0.01), PolicyError);
  try {
    (void)integrate_coefficients_rk4(h1, basis, c0, 2.0 * kPi, 0.01);
  } catch (const PolicyError& e) {
    CHECK(e.policy() == "rk4_step_cap");
  }
}
