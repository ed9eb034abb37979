#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include <cmath>

#include "qdyn/basis.hpp"
#include "qdyn/dirac.hpp"
#include "qdyn/observable.hpp"
#include "qdyn/propagator.hpp"
#include "qdyn/quasicanon.hpp"
#include "qdyn/state.hpp"

namespace {

qdyn::GaugeField uniform_pulse(double e0, double t1, int ndim) {
  qdyn::GaugeField field = qdyn::GaugeField::empty(ndim);
  field.phi1.terms.push_back({qdyn::CoordPoly::monomial(ndim, -e0, 1, 0),
                              qdyn::TimeProfile::make_rect(1.0, t1)});
  field.canonicalize();
  return field;
}

qdyn::GaugeField magnetic_pulse(double eps, double t1) {
  qdyn::GaugeField field = qdyn::GaugeField::empty(2);
  field.a1[0].terms.push_back({qdyn::CoordPoly::monomial(2, -0.5 * eps, 0, 1),
                               qdyn::TimeProfile::make_rect(1.0, t1)});
  field.a1[1].terms.push_back({qdyn::CoordPoly::monomial(2, 0.5 * eps, 1, 0),
                               qdyn::TimeProfile::make_rect(1.0, t1)});
  field.canonicalize();
  return field;
}

void BM_build_basis_2d(benchmark::State& state) {
  qdyn::Constants c;
  int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    qdyn::Basis basis = qdyn::build_basis(qdyn::BasisKind::ho2d, 1.0, n_max, c);
    benchmark::DoNotOptimize(basis.h0.m.data());
  }
}
BENCHMARK(BM_build_basis_2d)->Arg(8)->Arg(16)->Arg(24);

void BM_sym_product(benchmark::State& state) {
  qdyn::Constants c;
  qdyn::Basis basis =
      qdyn::build_basis(qdyn::BasisKind::ho2d, 1.0, static_cast<int>(state.range(0)), c);
  for (auto _ : state) {
    qdyn::Operator prod = qdyn::sym_product(basis.q[0], basis.p[1], basis.interior_dim);
    benchmark::DoNotOptimize(prod.m.data());
  }
  state.SetLabel("dim " + std::to_string(basis.dim));
}
BENCHMARK(BM_sym_product)->Arg(8)->Arg(16)->Arg(24);

void BM_propagate_cn(benchmark::State& state) {
  qdyn::Constants c;
  qdyn::Basis basis =
      qdyn::build_basis(qdyn::BasisKind::ho1d, 1.0, static_cast<int>(state.range(0)), c);
  qdyn::PerturbingHamiltonian h1 = qdyn::assemble_h1(uniform_pulse(1e-2, 1.0, 1), basis, false);
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(basis.dim);
  psi0[0] = 1.0;
  const double T = 1.0;
  const double dt = std::min(1e-3, 0.04 / basis.omega_max());
  long long steps = 0;
  for (auto _ : state) {
    qdyn::PropagationResult r = qdyn::propagate(h1, basis, psi0, T, dt);
    steps = static_cast<long long>(r.times.size()) - 1;
    benchmark::DoNotOptimize(r.psi.data());
  }
  state.SetItemsProcessed(state.iterations() * steps);  // items are time steps
}
BENCHMARK(BM_propagate_cn)->Arg(12)->Arg(24)->Arg(48);

void BM_evolve_invariant(benchmark::State& state) {
  qdyn::Constants c;
  qdyn::Basis basis = qdyn::build_basis(qdyn::BasisKind::ho2d, 1.0, 10, c);
  qdyn::PhysicalFields pf = qdyn::physical_fields(magnetic_pulse(1e-2, 5.0), c);
  qdyn::State psi = qdyn::State::eigenstate(basis, basis.index_of(1, 1));
  qdyn::ObservableSpec spec = qdyn::energy_spec(basis);
  for (auto _ : state) {
    qdyn::Trajectory tr = qdyn::evolve_expectation(spec, pf, basis, psi, 10.0, 0.025);
    benchmark::DoNotOptimize(tr.values.back());
  }
}
BENCHMARK(BM_evolve_invariant);

void BM_evolve_general(benchmark::State& state) {
  qdyn::Constants c;
  qdyn::Basis basis = qdyn::build_basis(qdyn::BasisKind::ho1d, 1.0, 12, c);
  qdyn::PhysicalFields pf = qdyn::physical_fields(uniform_pulse(1e-2, 2.0, 1), c);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(basis.dim);
  v[0] = v[1] = 1.0;
  qdyn::State psi = qdyn::State::normalized(v);
  qdyn::ObservableSpec spec = qdyn::coordinate_spec(qdyn::PhaseVar::qx, 1);
  for (auto _ : state) {
    qdyn::Trajectory tr = qdyn::evolve_expectation(spec, pf, basis, psi, 5.0, 1e-2);
    benchmark::DoNotOptimize(tr.values.back());
  }
}
BENCHMARK(BM_evolve_general);

}  // namespace

BENCHMARK_MAIN();
