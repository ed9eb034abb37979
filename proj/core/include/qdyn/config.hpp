#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdyn/basis.hpp"
#include "qdyn/constants.hpp"
#include "qdyn/gauge_field.hpp"
#include "qdyn/observable.hpp"
#include "qdyn/propagator.hpp"
#include "qdyn/quasicanon.hpp"

namespace qdyn {

// Parsed scenario file. INI-style sections; see configs/ for the grammar by
// example. Field terms are separable pieces:
//   term = <component> profile=<kind> amplitude=<v> [t1=<v>] [omega_d=<v>] poly=[(c,ex[,ey]),...]
// with component one of phi1, a1_x, a1_y (gauge-function terms omit the
// component). Initial states are `eigen <n> [<m_ang>]` or
// `coeffs [(index,re,im),...]` (normalized on load).
struct ExperimentConfig {
  Constants constants;

  BasisKind kind{BasisKind::ho1d};
  double omega0{1.0};
  int n_max{0};

  GaugeField field;
  std::optional<GaugeFunction> gauge_function;

  bool initial_is_eigen{true};
  int initial_n{0};
  int initial_m{0};
  std::vector<std::tuple<int, double, double>> initial_coeffs;

  std::vector<std::string> observables;  // catalog names

  double total_time{0.0};
  double dt{0.0};
  bool include_a2{false};
  PropagatorMethod solver{PropagatorMethod::crank_nicolson};
  StepRule scheme{StepRule::left_endpoint};
  double euler_dt{0.0};  // 0: use dt
  int euler_steps{50};
  std::optional<double> poisson_t;

  // section -> ordered key/value pairs, echoed into the run manifest
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> raw;

  Basis make_basis() const;
  Eigen::VectorXcd initial_full(const Basis& basis) const;    // full-basis unit vector
  Eigen::VectorXcd initial_interior(const Basis& basis) const;
};

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

}  // namespace qdyn
