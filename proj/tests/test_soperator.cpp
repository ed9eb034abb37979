#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <complex>

#include "helpers.hpp"
#include "qdyn/propagator.hpp"
#include "qdyn/soperator.hpp"

using namespace qdyn;
using qtest::kPi;

TEST_CASE("resonant transition element matches the closed form and the amplitude route") {
  Constants c;
  Basis basis = build_basis(BasisKind::ho1d, 1.0, 12, c);
  const double e0 = 1e-2;
  const double T = 4.0 * kPi;
  TimeProfile drive = TimeProfile::make_sine(1.0, 1.0, T);

  GaugeField field = GaugeField::empty(1);
  field.phi1.terms.push_back({CoordPoly::monomial(1, -e0, 1), drive});
  field.canonicalize();
  PhysicalFields fields = physical_fields(field, c);

  SMatrix s = s_matrix(energy_spec(basis), fields, basis, T);
  REQUIRE(s.dim == basis.interior_dim);
  REQUIRE(s.defined[1][0]);
  double p_s = std::norm(s.s(1, 0));

  double p_ref = forced_oscillator_reference(e0, drive, basis, T);
  CHECK(p_s == doctest::Approx(p_ref).epsilon(1e-6));

  PerturbingHamiltonian h1 = assemble_h1(field, basis, false);
  double p_dirac = first_order_probability(h1, basis, 1, 0, T);
  CHECK(p_s == doctest::Approx(p_dirac).epsilon(1e-9));

  CHECK(transition_probability_s(s, 1, 0) == doctest::Approx(p_s).epsilon(1e-14));
}

TEST_CASE("transition moduli are symmetric and scale linearly with the field") {
  Constants c;
  Basis basis = build_basis(BasisKind::ho1d, 1.0, 10, c);
  const double t1 = 2.0;
  const double T = 3.0;

  auto build = [&](double e0) {
    return s_matrix(energy_spec(basis), physical_fields(qtest::uniform_e_scalar(e0, t1), c),
                    basis, T);
  };
  SMatrix s1 = build(1e-2);
  SMatrix s2 = build(2e-2);

  for (int k = 0; k < s1.dim; ++k) {
    for (int kp = 0; kp < s1.dim; ++kp) {
      if (k == kp) continue;
      REQUIRE(s1.defined[k][kp]);
      CHECK(std::abs(std::abs(s1.s(k, kp)) - std::abs(s1.s(kp, k))) <=
            1e-8 * (std::abs(s1.s(k, kp)) + 1e-18));
      CHECK(std::abs(s2.s(k, kp) - 2.0 * s1.s(k, kp)) <= 1e-12 * (std::abs(s1.s(k, kp)) + 1.0));
    }
  }
}

TEST_CASE("transition matrix is gauge invariant") {
  Constants c;
  Basis basis = build_basis(BasisKind::ho1d, 1.0, 10, c);
  const double e0 = 1e-2;
  const double t1 = 2.0;
  const double T = 3.0;

  SMatrix sa = s_matrix(energy_spec(basis), physical_fields(qtest::uniform_e_scalar(e0, t1), c),
                        basis, T);
  SMatrix sb = s_matrix(energy_spec(basis),
                        physical_fields(qtest::uniform_e_vector(e0, t1, c), c), basis, T);
  for (int k = 0; k < sa.dim; ++k) {
    for (int kp = 0; kp < sa.dim; ++kp) {
      if (k == kp) continue;
      CHECK(std::abs(sa.s(k, kp) - sb.s(k, kp)) <= 1e-12);
    }
  }
}

TEST_CASE("degenerate pairs with content are flagged undefined") {
  Constants c;
  Basis basis = build_basis(BasisKind::ho2d, 1.0, 8, c);
  GaugeField pulse = qtest::magnetic_pulse(1e-2, 5.0);
  PhysicalFields fields = physical_fields(pulse, c);

  SMatrix s = s_matrix(lz_spec(c), fields, basis, 10.0);
  int i00 = basis.index_of(0, 0);
  int i20 = basis.index_of(2, 0);  // same m_ang, so zero gap in Lz
  CHECK_FALSE(s.defined[i20][i00]);
  CHECK(std::isnan(s.s(i20, i00).real()));
  CHECK(s.numerator_abs(i20, i00) > 1e-12);  // the integral itself is nonzero
  CHECK_THROWS_AS((void)transition_probability_s(s, i20, i00), std::invalid_argument);

  // pairs with zero gap and zero integral are also undefined, without content:
  // the virial-type rate couples only single steps of both circular ladders,
  // so (0,0) -> (4, m=0) carries no integral
  int i40 = basis.index_of(4, 0);
  CHECK_FALSE(s.defined[i40][i00]);
  CHECK(s.numerator_abs(i40, i00) <= 1e-14);
}

TEST_CASE("noninvariant observables are rejected") {
  Constants c;
  Basis basis = build_basis(BasisKind::ho1d, 1.0, 10, c);
  PhysicalFields fields = physical_fields(qtest::uniform_e_scalar(1e-2, 2.0), c);
  CHECK_THROWS_AS((void)s_matrix(coordinate_spec(PhaseVar::qx, 1), fields, basis, 3.0),
                  std::invalid_argument);
}

TEST_CASE("consistency verdicts agree for a uniform electric pulse") {
  Constants c;
  Basis basis = build_basis(BasisKind::ho2d, 1.0, 8, c);
  PhysicalFields fields = physical_fields(qtest::uniform_e_scalar(1e-2, kPi, 2), c);

  auto rows = consistency_check(energy_spec(basis), lz_spec(c), fields, basis, 2.0 * kPi);
  REQUIRE(!rows.empty());
  for (const auto& r : rows) {
    CHECK(r.verdict == "equal");
    CHECK(r.rel_diff <= 1e-6);
  }
}

TEST_CASE("consistency surfaces breakdowns as infinite discrepancies") {
  Constants c;
  Basis basis = build_basis(BasisKind::ho2d, 1.0, 8, c);
  PhysicalFields fields = physical_fields(qtest::magnetic_pulse(1e-2, 5.0), c);

  auto rows = consistency_check(energy_spec(basis), lz_spec(c), fields, basis, 10.0);
  REQUIRE(!rows.empty());
  int inf_rows = 0;
  for (const auto& r : rows) {
    if (std::isinf(r.b_abs)) {
      ++inf_rows;
      CHECK(r.a_abs == 0.0);  // the energy route is defined and predicts silence
      CHECK(r.verdict == "unequal");
      CHECK(std::isinf(r.rel_diff));
    }
  }
  CHECK(inf_rows > 0);
}
