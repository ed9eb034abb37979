#include "qdyn/experiment.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <ostream>
#include <sstream>

#include "qdyn/csv.hpp"
#include "qdyn/dirac.hpp"
#include "qdyn/errors.hpp"
#include "qdyn/propagator.hpp"
#include "qdyn/quasicanon.hpp"
#include "qdyn/soperator.hpp"
#include "qdyn/version.hpp"

namespace qdyn {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string index_name(const Basis& basis, int idx) {
  const StateLabel& l = basis.labels[idx];
  if (basis.ndim == 1) return std::to_string(l.n);
  return std::to_string(l.n) + "m" + (l.m_ang < 0 ? "m" + std::to_string(-l.m_ang)
                                                  : std::to_string(l.m_ang));
}

ordered_json config_echo(const ExperimentConfig& cfg) {
  ordered_json sections = ordered_json::array();
  for (const auto& [name, entries] : cfg.raw) {
    ordered_json sec;
    sec["section"] = name;
    ordered_json kv = ordered_json::array();
    for (const auto& [k, v] : entries) kv.push_back({k, v});
    sec["entries"] = kv;
    sections.push_back(sec);
  }
  return sections;
}

ordered_json policy_block() {
  ordered_json p;
  p["rk4_step_cap"] = "dt <= min(0.01/omega_max, t1/200)";
  p["propagator_step_cap"] = "dt <= min(0.05/omega_max, t1/200)";
  p["quasicanon_step_cap"] = "dt <= t1/100";
  p["quadrature_min_panels_per_window"] = 400;
  p["quadrature_rel_tol"] = 1e-9;
  p["norm_budget"] = "1e-10 per 1000 steps";
  return p;
}

struct ManifestWriter {
  ordered_json j;
  std::vector<std::string> outputs;

  ManifestWriter(const std::string& subcommand, const std::filesystem::path& config_path,
                 const ExperimentConfig& cfg, const Basis& basis) {
    j["tool"] = "qdyn";
    j["version"] = version_string;
    j["subcommand"] = subcommand;
    j["config_path"] = config_path.string();
    j["config"] = config_echo(cfg);
    ordered_json resolved;
    resolved["kind"] = (basis.kind == BasisKind::ho1d) ? "ho1d" : "ho2d";
    resolved["omega0"] = basis.omega0;
    resolved["n_max"] = basis.n_max;
    resolved["dim"] = basis.dim;
    resolved["interior_dim"] = basis.interior_dim;
    resolved["hbar"] = basis.constants.hbar;
    resolved["mass"] = basis.constants.mass;
    resolved["charge"] = basis.constants.charge;
    resolved["c_light"] = basis.constants.c_light;
    resolved["T"] = cfg.total_time;
    resolved["dt"] = cfg.dt;
    resolved["include_a2"] = cfg.include_a2;
    j["resolved"] = resolved;
    j["policies"] = policy_block();
  }

  void note(const std::string& key, const ordered_json& value) { j[key] = value; }

  void add_output(const std::string& name) { outputs.push_back(name); }

  void write(const std::filesystem::path& out_dir) {
    j["outputs"] = outputs;
    std::ofstream out(out_dir / "manifest.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest.json");
    out << j.dump(2) << '\n';
  }
};

void write_table(const CsvTable& table, const std::filesystem::path& out_dir,
                 const std::string& name, ManifestWriter& mw) {
  table.write(out_dir / name);
  mw.add_output(name);
}

struct ResolvedObservable {
  std::string name;
  bool has_spec{false};
  ObservableSpec spec;
  Operator op;  // built matrix (spec or matrix-level)
};

std::vector<ResolvedObservable> resolve_observables(const ExperimentConfig& cfg,
                                                    const Basis& basis) {
  std::vector<ResolvedObservable> out;
  for (const std::string& name : cfg.observables) {
    ResolvedObservable r;
    r.name = name;
    if (name == "energy") {
      r.has_spec = true;
      r.spec = energy_spec(basis);
    } else if (name == "lz") {
      r.has_spec = true;
      r.spec = lz_spec(basis.constants);
    } else if (name == "qx") {
      r.has_spec = true;
      r.spec = coordinate_spec(PhaseVar::qx, basis.ndim);
    } else if (name == "qy") {
      r.has_spec = true;
      r.spec = coordinate_spec(PhaseVar::qy, basis.ndim);
    } else if (name == "lz2") {
      r.has_spec = false;
      r.op = lz_squared_operator(basis);
    } else {
      throw ConfigError("observables.observable", "unknown observable '" + name + "'");
    }
    if (r.has_spec) r.op = build_observable(r.spec, basis);
    out.push_back(std::move(r));
  }
  return out;
}

int require_interior_eigen_initial(const ExperimentConfig& cfg, const Basis& basis) {
  if (!cfg.initial_is_eigen) {
    throw ConfigError("initial.state", "this pipeline needs an eigenstate initial state");
  }
  int idx;
  try {
    idx = basis.index_of(cfg.initial_n, cfg.initial_m);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("initial.state", e.what());
  }
  if (!basis.is_interior(idx)) {
    throw ConfigError("initial.state", "initial eigenstate must lie in the interior block");
  }
  return idx;
}

CsvTable summary_table() {
  CsvTable t;
  t.header = {"quantity", "value"};
  return t;
}

// ---- pipelines ----

void run_dirac(const ExperimentConfig& cfg, const Basis& basis,
               const std::filesystem::path& out_dir, ManifestWriter& mw, std::ostream& log) {
  PerturbingHamiltonian h1 = assemble_h1(cfg.field, basis, cfg.include_a2);
  int k = require_interior_eigen_initial(cfg, basis);
  const double T = cfg.total_time;

  CsvTable summary = summary_table();

  CsvTable amps;
  amps.header = {"n", "label", "amp_re", "amp_im", "prob"};
  for (int n = 0; n < basis.interior_dim; ++n) {
    if (n == k) continue;
    std::complex<double> a = first_order_amplitude(h1, basis, n, k, T);
    amps.rows.push_back({static_cast<std::int64_t>(n), index_name(basis, n), a.real(), a.imag(),
                         std::norm(a)});
    summary.rows.push_back({"P_to_" + index_name(basis, n), std::norm(a)});
  }
  write_table(amps, out_dir, "first_order.csv", mw);

  Eigen::VectorXcd c0 = cfg.initial_interior(basis);
  Rk4Result rk4 = integrate_coefficients_rk4(h1, basis, c0, T, cfg.dt);
  CsvTable rk4_table;
  rk4_table.header = {"t", "norm2"};
  double drift = 0.0;
  for (std::size_t i = 0; i < rk4.times.size(); ++i) {
    rk4_table.rows.push_back({rk4.times[i], rk4.norms2[i]});
    drift = std::max(drift, std::abs(rk4.norms2[i] - 1.0));
  }
  write_table(rk4_table, out_dir, "rk4_norms.csv", mw);
  summary.rows.push_back({"rk4_norm_drift", drift});
  for (int n = 0; n < basis.interior_dim; ++n) {
    if (n == k) continue;
    summary.rows.push_back({"P_rk4_to_" + index_name(basis, n), std::norm(rk4.c[n])});
  }

  double euler_dt = cfg.euler_dt > 0.0 ? cfg.euler_dt : cfg.dt;
  std::vector<double> euler = euler_norm_demo(h1, basis, k, euler_dt, cfg.euler_steps);
  CsvTable euler_table;
  euler_table.header = {"step", "t", "norm2"};
  for (std::size_t i = 0; i < euler.size(); ++i) {
    euler_table.rows.push_back(
        {static_cast<std::int64_t>(i), static_cast<double>(i) * euler_dt, euler[i]});
  }
  write_table(euler_table, out_dir, "euler_norm.csv", mw);
  summary.rows.push_back({"euler_norm2_step1", euler[std::min<std::size_t>(1, euler.size() - 1)]});
  summary.rows.push_back({"euler_norm2_final", euler.back()});

  if (cfg.gauge_function) {
    // The declared gauge function maps the reference gauge to this config's
    // potentials, so the sensitivity pair is (this gauge, reference gauge).
    GaugeFunction back;
    back.ndim = cfg.gauge_function->ndim;
    back.f = cfg.gauge_function->f.scaled(-1.0);
    CsvTable gs_table;
    gs_table.header = {"n", "label", "p_original", "p_reference", "rel_diff"};
    double max_rel = 0.0;
    for (int n = 0; n < basis.interior_dim; ++n) {
      if (n == k) continue;
      GaugeSensitivity gs = gauge_sensitivity(cfg.field, back, basis, k, n, T, cfg.include_a2);
      gs_table.rows.push_back({static_cast<std::int64_t>(n), index_name(basis, n), gs.p_original,
                               gs.p_transformed, gs.rel_diff});
      if (std::max(gs.p_original, gs.p_transformed) > 1e-18) {
        max_rel = std::max(max_rel, gs.rel_diff);
      }
    }
    write_table(gs_table, out_dir, "gauge_sensitivity.csv", mw);
    summary.rows.push_back({"gauge_sensitivity_max_rel", max_rel});
  }

  write_table(summary, out_dir, "summary.csv", mw);
  log << "dirac: wrote " << amps.rows.size() << " first-order amplitudes, rk4 drift " << drift
      << "\n";
}

void run_quasicanon(const ExperimentConfig& cfg, const Basis& basis,
                    const std::filesystem::path& out_dir, ManifestWriter& mw, std::ostream& log) {
  PhysicalFields fields = physical_fields(cfg.field, basis.constants);
  State psi0 = State::normalized(cfg.initial_full(basis));
  std::vector<ResolvedObservable> obs = resolve_observables(cfg, basis);
  if (obs.empty()) throw ConfigError("observables", "quasicanon needs at least one observable");

  CsvTable summary = summary_table();

  CsvTable inv;
  inv.header = {"observable", "residual", "invariant"};
  for (const ResolvedObservable& r : obs) {
    double res = invariance_residual(r.op, basis);
    inv.rows.push_back({r.name, res, std::string(res <= 1e-10 ? "yes" : "no")});
    summary.rows.push_back({"invariance_residual_" + r.name, res});
  }
  write_table(inv, out_dir, "invariance.csv", mw);

  std::vector<Trajectory> trajs;
  std::vector<std::string> traj_names;
  for (const ResolvedObservable& r : obs) {
    if (!r.has_spec) continue;  // matrix-only observables have no rate law here
    trajs.push_back(evolve_expectation(r.spec, fields, basis, psi0, cfg.total_time, cfg.dt,
                                       cfg.scheme));
    traj_names.push_back(r.name);
  }
  if (!trajs.empty()) {
    CsvTable tt;
    tt.header = {"t"};
    for (const std::string& n : traj_names) tt.header.push_back(n);
    for (std::size_t i = 0; i < trajs.front().times.size(); ++i) {
      std::vector<CsvCell> row{trajs.front().times[i]};
      for (const Trajectory& tr : trajs) row.push_back(tr.values[i]);
      tt.rows.push_back(std::move(row));
    }
    write_table(tt, out_dir, "trajectories.csv", mw);
    for (std::size_t i = 0; i < trajs.size(); ++i) {
      summary.rows.push_back({traj_names[i] + "_initial", trajs[i].values.front()});
      summary.rows.push_back({traj_names[i] + "_final", trajs[i].values.back()});
      double dev = 0.0;
      for (double v : trajs[i].values) dev = std::max(dev, std::abs(v - trajs[i].values.front()));
      summary.rows.push_back({traj_names[i] + "_max_dev", dev});
    }
  }

  double pt = cfg.poisson_t ? *cfg.poisson_t : 0.5 * cfg.total_time;
  CsvTable pc;
  pc.header = {"observable", "t", "residual"};
  for (const ResolvedObservable& r : obs) {
    if (!r.has_spec) continue;
    double res = poisson_form_residual(r.spec, cfg.field, basis, pt);
    pc.rows.push_back({r.name, pt, res});
    summary.rows.push_back({"poisson_residual_" + r.name, res});
  }
  write_table(pc, out_dir, "poisson.csv", mw);

  write_table(summary, out_dir, "summary.csv", mw);
  log << "quasicanon: " << trajs.size() << " trajectories over T = " << cfg.total_time << "\n";
}

void run_soperator(const ExperimentConfig& cfg, const Basis& basis,
                   const std::filesystem::path& out_dir, ManifestWriter& mw, std::ostream& log) {
  PhysicalFields fields = physical_fields(cfg.field, basis.constants);
  std::vector<ResolvedObservable> obs = resolve_observables(cfg, basis);
  if (obs.empty()) throw ConfigError("observables", "soperator needs at least one observable");
  for (const ResolvedObservable& r : obs) {
    if (!r.has_spec) {
      throw ConfigError("observables.observable",
                        "'" + r.name + "' has no degree-<=2 phase-space form");
    }
  }

  CsvTable summary = summary_table();
  std::vector<SMatrix> mats;
  for (const ResolvedObservable& r : obs) {
    SMatrix s = [&] {
      try {
        return s_matrix(r.spec, fields, basis, cfg.total_time);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("observables.observable", e.what());
      }
    }();
    CsvTable st;
    st.header = {"k", "kp", "s_re", "s_im", "s_abs", "defined", "numerator_abs"};
    for (int k = 0; k < s.dim; ++k) {
      for (int kp = 0; kp < s.dim; ++kp) {
        if (k == kp) continue;
        bool def = s.defined[k][kp];
        st.rows.push_back({static_cast<std::int64_t>(k), static_cast<std::int64_t>(kp),
                           def ? s.s(k, kp).real() : std::nan(""),
                           def ? s.s(k, kp).imag() : std::nan(""),
                           def ? std::abs(s.s(k, kp)) : std::nan(""),
                           static_cast<std::int64_t>(def ? 1 : 0), s.numerator_abs(k, kp)});
      }
    }
    write_table(st, out_dir, "s_" + r.name + ".csv", mw);
    mats.push_back(std::move(s));
  }

  // transition probabilities from an eigenstate initial, first observable
  if (cfg.initial_is_eigen) {
    int k = require_interior_eigen_initial(cfg, basis);
    const SMatrix& s = mats.front();
    for (int n = 0; n < s.dim; ++n) {
      if (n == k || !s.defined[n][k]) continue;
      summary.rows.push_back({"P_to_" + index_name(basis, n), std::norm(s.s(n, k))});
    }
  }

  if (obs.size() >= 2) {
    std::vector<ConsistencyRow> rows =
        consistency_check(obs[0].spec, obs[1].spec, fields, basis, cfg.total_time);
    CsvTable ct;
    ct.header = {"k", "kp", "obs_a_abs", "obs_b_abs", "rel_diff", "verdict"};
    std::int64_t unequal = 0;
    double max_rel_defined = 0.0;
    for (const ConsistencyRow& r : rows) {
      ct.rows.push_back({static_cast<std::int64_t>(r.k), static_cast<std::int64_t>(r.kp), r.a_abs,
                         r.b_abs, r.rel_diff, r.verdict});
      if (r.verdict != "equal") ++unequal;
      if (std::isfinite(r.rel_diff)) max_rel_defined = std::max(max_rel_defined, r.rel_diff);
    }
    write_table(ct, out_dir, "consistency.csv", mw);
    summary.rows.push_back({"consistency_pairs", static_cast<std::int64_t>(rows.size())});
    summary.rows.push_back({"consistency_unequal", unequal});
    summary.rows.push_back({"consistency_max_rel_defined", max_rel_defined});
    log << "soperator: consistency " << rows.size() << " pairs, " << unequal << " unequal\n";
  }

  write_table(summary, out_dir, "summary.csv", mw);
}

void run_oracle(const ExperimentConfig& cfg, const Basis& basis,
                const std::filesystem::path& out_dir, ManifestWriter& mw, std::ostream& log) {
  PerturbingHamiltonian h1 = assemble_h1(cfg.field, basis, cfg.include_a2);
  Eigen::VectorXcd psi0 = cfg.initial_full(basis);
  std::vector<ResolvedObservable> obs = resolve_observables(cfg, basis);

  PropagationResult prop =
      propagate(h1, basis, psi0, cfg.total_time, cfg.dt, cfg.solver, !obs.empty());

  CsvTable summary = summary_table();

  CsvTable tr;
  tr.header = {"index", "label", "prob"};
  bool restored = cfg.gauge_function.has_value();
  if (restored) tr.header.push_back("prob_restored");
  for (int n = 0; n < basis.dim; ++n) {
    std::vector<CsvCell> row{static_cast<std::int64_t>(n), index_name(basis, n),
                             exact_transition(prop, n)};
    if (restored) {
      row.push_back(
          exact_transition_restored(prop, *cfg.gauge_function, basis, cfg.total_time, n));
    }
    tr.rows.push_back(std::move(row));
  }
  write_table(tr, out_dir, "transitions.csv", mw);
  for (int n = 0; n < basis.interior_dim; ++n) {
    double p = restored
                   ? exact_transition_restored(prop, *cfg.gauge_function, basis, cfg.total_time, n)
                   : exact_transition(prop, n);
    summary.rows.push_back({"P_to_" + index_name(basis, n), p});
    if (restored) {
      summary.rows.push_back({"P_raw_to_" + index_name(basis, n), exact_transition(prop, n)});
    }
  }

  CsvTable norms;
  norms.header = {"t", "norm2"};
  double drift = 0.0;
  for (std::size_t i = 0; i < prop.times.size(); ++i) {
    norms.rows.push_back({prop.times[i], prop.norms2[i]});
    drift = std::max(drift, std::abs(prop.norms2[i] - prop.norms2.front()));
  }
  write_table(norms, out_dir, "norms.csv", mw);
  summary.rows.push_back({"norm_drift", drift});

  if (!obs.empty()) {
    CsvTable et;
    et.header = {"t"};
    std::vector<std::vector<double>> series;
    for (const ResolvedObservable& r : obs) {
      et.header.push_back(r.name);
      series.push_back(exact_expectation_series(prop, r.op));
    }
    for (std::size_t i = 0; i < prop.times.size(); ++i) {
      std::vector<CsvCell> row{prop.times[i]};
      for (const auto& s : series) row.push_back(s[i]);
      et.rows.push_back(std::move(row));
    }
    write_table(et, out_dir, "expectations.csv", mw);
    for (std::size_t i = 0; i < obs.size(); ++i) {
      summary.rows.push_back({obs[i].name + "_initial", series[i].front()});
      summary.rows.push_back({obs[i].name + "_final", series[i].back()});
      double dev = 0.0;
      for (double v : series[i]) dev = std::max(dev, std::abs(v - series[i].front()));
      summary.rows.push_back({obs[i].name + "_max_dev", dev});
    }
  }

  write_table(summary, out_dir, "summary.csv", mw);
  log << "oracle: " << prop.times.size() - 1 << " steps, norm drift " << drift << "\n";
}

}  // namespace

void run_single(const std::string& subcommand, const std::filesystem::path& config_path,
                const std::filesystem::path& out_dir, std::ostream& log) {
  ExperimentConfig cfg = parse_config_file(config_path);
  Basis basis = cfg.make_basis();
  std::filesystem::create_directories(out_dir);
  ManifestWriter mw(subcommand, config_path, cfg, basis);

  PhysicalFields pf = physical_fields(cfg.field, basis.constants);
  mw.note("impulsive_e1_dropped", pf.impulsive_e1);
  mw.note("impulsive_phi1_dropped", cfg.field.impulsive_phi1_dropped);

  if (subcommand == "dirac") {
    run_dirac(cfg, basis, out_dir, mw, log);
  } else if (subcommand == "quasicanon") {
    run_quasicanon(cfg, basis, out_dir, mw, log);
  } else if (subcommand == "soperator") {
    run_soperator(cfg, basis, out_dir, mw, log);
  } else if (subcommand == "oracle") {
    run_oracle(cfg, basis, out_dir, mw, log);
  } else {
    throw ConfigError("subcommand", "unknown subcommand '" + subcommand + "'");
  }
  mw.write(out_dir);
}

void run_compare(const std::filesystem::path& perturbative_csv,
                 const std::filesystem::path& exact_csv, const std::filesystem::path& out_path,
                 std::ostream& log) {
  auto load = [](const std::filesystem::path& p) {
    CsvTable t;
    try {
      t = read_csv(p);
    } catch (const std::exception& e) {
      throw ConfigError("compare", e.what());
    }
    if (t.header.size() < 2 || t.header[0] != "quantity" || t.header[1] != "value") {
      throw ConfigError("compare", p.string() + " is not a summary.csv");
    }
    std::vector<std::pair<std::string, double>> rows;
    for (const auto& row : t.rows) {
      rows.emplace_back(std::get<std::string>(row[0]),
                        std::stod(std::get<std::string>(row[1])));
    }
    return rows;
  };
  auto pert = load(perturbative_csv);
  auto exact = load(exact_csv);
  std::map<std::string, double> exact_map(exact.begin(), exact.end());

  CsvTable out;
  out.header = {"quantity", "perturbative", "exact", "abs_diff", "rel_diff"};
  for (const auto& [name, pv] : pert) {
    auto it = exact_map.find(name);
    if (it == exact_map.end()) continue;
    double ev = it->second;
    double ad = std::abs(pv - ev);
    double rd = ad / std::max({std::abs(pv), std::abs(ev), 1e-300});
    out.rows.push_back({name, pv, ev, ad, rd});
  }
  if (out_path.has_parent_path()) std::filesystem::create_directories(out_path.parent_path());
  out.write(out_path);
  log << "compare: " << out.rows.size() << " joined quantities\n";
}

void run_sweep(const std::string& subcommand,
               const std::vector<std::filesystem::path>& config_paths,
               const std::filesystem::path& out_root, std::ostream& log) {
  if (config_paths.empty()) throw ConfigError("sweep", "no configs given");
  struct Item {
    std::filesystem::path config;
    std::future<std::string> fut;
  };
  std::vector<Item> items;
  for (const auto& cp : config_paths) {
    std::filesystem::path sub = out_root / cp.stem();
    items.push_back({cp, std::async(std::launch::async, [subcommand, cp, sub] {
                       std::ostringstream local;
                       run_single(subcommand, cp, sub, local);
                       return local.str();
                     })});
  }
  std::exception_ptr first_error;
  for (Item& item : items) {
    try {
      log << "[" << item.config.stem().string() << "] " << item.fut.get();
    } catch (...) {
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

int guarded(const std::function<void()>& body, std::ostream& err) {
  try {
    body();
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const PolicyError& e) {
    err << "policy error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qdyn
