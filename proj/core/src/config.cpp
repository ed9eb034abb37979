#include "qdyn/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "qdyn/errors.hpp"

namespace qdyn {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& value, const std::string& field) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field, "expected a number, got '" + value + "'");
  }
}

int parse_int(const std::string& value, const std::string& field) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field, "expected an integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& value, const std::string& field) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ConfigError(field, "expected true/false, got '" + value + "'");
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

// poly=[(c,ex),(c,ex,ey),...], no embedded whitespace
CoordPoly parse_poly(const std::string& text, int ndim, const std::string& field) {
  std::string s = text;
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    throw ConfigError(field, "poly must look like [(c,ex[,ey]),...]");
  }
  s = s.substr(1, s.size() - 2);
  CoordPoly poly = CoordPoly::zero(ndim);
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == ',') {
      ++i;
      continue;
    }
    if (s[i] != '(') throw ConfigError(field, "expected '(' in poly");
    std::size_t close = s.find(')', i);
    if (close == std::string::npos) throw ConfigError(field, "unbalanced '(' in poly");
    std::string group = s.substr(i + 1, close - i - 1);
    std::vector<std::string> nums;
    std::string cur;
    for (char ch : group) {
      if (ch == ',') {
        nums.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    nums.push_back(cur);
    if (nums.size() != 2 && nums.size() != 3) {
      throw ConfigError(field, "poly entries need 2 or 3 numbers");
    }
    double c = parse_double(nums[0], field);
    int ex = parse_int(nums[1], field);
    int ey = nums.size() == 3 ? parse_int(nums[2], field) : 0;
    try {
      poly = poly.plus(CoordPoly::monomial(ndim, c, ex, ey));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(field, e.what());
    }
    i = close + 1;
  }
  return poly;
}

struct TermParts {
  std::string component;  // empty for gauge-function terms
  TimeProfile profile;
  CoordPoly poly;
};

TermParts parse_term(const std::string& value, int ndim, bool with_component,
                     const std::string& field) {
  std::vector<std::string> toks = split_ws(value);
  std::size_t first = 0;
  TermParts parts;
  parts.poly = CoordPoly::zero(ndim);
  if (with_component) {
    if (toks.empty()) throw ConfigError(field, "missing component");
    parts.component = toks[0];
    first = 1;
  }
  std::string kind;
  double amplitude = 1.0;
  double t1 = 0.0;
  double omega_d = 0.0;
  bool have_poly = false;
  bool have_t1 = false;
  bool have_omega = false;
  for (std::size_t i = first; i < toks.size(); ++i) {
    std::size_t eq = toks[i].find('=');
    if (eq == std::string::npos) throw ConfigError(field, "expected key=value, got '" + toks[i] + "'");
    std::string key = toks[i].substr(0, eq);
    std::string val = toks[i].substr(eq + 1);
    if (key == "profile") {
      kind = val;
    } else if (key == "amplitude") {
      amplitude = parse_double(val, field);
    } else if (key == "t1") {
      t1 = parse_double(val, field);
      have_t1 = true;
    } else if (key == "omega_d") {
      omega_d = parse_double(val, field);
      have_omega = true;
    } else if (key == "poly") {
      parts.poly = parse_poly(val, ndim, field);
      have_poly = true;
    } else {
      throw ConfigError(field, "unknown term key '" + key + "'");
    }
  }
  if (kind.empty()) throw ConfigError(field, "term needs profile=<kind>");
  if (!have_poly) throw ConfigError(field, "term needs poly=[...]");
  try {
    if (kind == "constant") {
      parts.profile = TimeProfile::make_constant(amplitude);
    } else if (kind == "rect") {
      if (!have_t1) throw ConfigError(field, "rect needs t1");
      parts.profile = TimeProfile::make_rect(amplitude, t1);
    } else if (kind == "ramp") {
      if (!have_t1) throw ConfigError(field, "ramp needs t1");
      parts.profile = TimeProfile::make_ramp(amplitude, t1);
    } else if (kind == "sine") {
      if (!have_t1 || !have_omega) throw ConfigError(field, "sine needs t1 and omega_d");
      parts.profile = TimeProfile::make_sine(amplitude, omega_d, t1);
    } else if (kind == "cosine") {
      if (!have_t1 || !have_omega) throw ConfigError(field, "cosine needs t1 and omega_d");
      parts.profile = TimeProfile::make_cosine(amplitude, omega_d, t1);
    } else if (kind == "linear_t") {
      parts.profile = TimeProfile::make_linear_t(amplitude);
    } else {
      throw ConfigError(field, "unknown profile kind '" + kind + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
  return parts;
}

}  // namespace

Basis ExperimentConfig::make_basis() const {
  return build_basis(kind, omega0, n_max, constants);
}

Eigen::VectorXcd ExperimentConfig::initial_full(const Basis& basis) const {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(basis.dim);
  if (initial_is_eigen) {
    int idx = 0;
    try {
      idx = basis.index_of(initial_n, initial_m);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("initial.state", e.what());
    }
    psi[idx] = 1.0;
    return psi;
  }
  for (const auto& [idx, re, im] : initial_coeffs) {
    if (idx < 0 || idx >= basis.dim) {
      throw ConfigError("initial.state", "coefficient index out of range");
    }
    psi[idx] += std::complex<double>(re, im);
  }
  double norm = psi.norm();
  if (norm <= 0.0) throw ConfigError("initial.state", "zero state vector");
  return psi / norm;
}

Eigen::VectorXcd ExperimentConfig::initial_interior(const Basis& basis) const {
  Eigen::VectorXcd full = initial_full(basis);
  if (full.tail(basis.dim - basis.interior_dim).norm() > 0.0) {
    throw ConfigError("initial.state",
                      "perturbative runs need the initial state inside the interior block");
  }
  return full.head(basis.interior_dim);
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  std::string section;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;

  std::vector<std::pair<std::string, std::string>> field_terms;
  std::vector<std::string> gauge_terms;
  std::string initial_line;
  bool have_dt = false;

  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw ConfigError(origin, "line " + std::to_string(lineno) + ": unterminated section");
      }
      section = t.substr(1, t.size() - 2);
      cfg.raw.emplace_back(section, std::vector<std::pair<std::string, std::string>>{});
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin, "line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (section.empty()) {
      throw ConfigError(origin, "line " + std::to_string(lineno) + ": key outside any section");
    }
    cfg.raw.back().second.emplace_back(key, value);
    std::string field = section + "." + key;

    if (section == "constants") {
      if (key == "hbar") cfg.constants.hbar = parse_double(value, field);
      else if (key == "mass") cfg.constants.mass = parse_double(value, field);
      else if (key == "charge") cfg.constants.charge = parse_double(value, field);
      else if (key == "c_light") cfg.constants.c_light = parse_double(value, field);
      else throw ConfigError(field, "unknown key");
    } else if (section == "basis") {
      if (key == "kind") {
        if (value == "ho1d") cfg.kind = BasisKind::ho1d;
        else if (value == "ho2d") cfg.kind = BasisKind::ho2d;
        else throw ConfigError(field, "kind must be ho1d or ho2d");
      } else if (key == "omega0") {
        cfg.omega0 = parse_double(value, field);
      } else if (key == "n_max") {
        cfg.n_max = parse_int(value, field);
      } else {
        throw ConfigError(field, "unknown key");
      }
    } else if (section == "field") {
      if (key != "term") throw ConfigError(field, "only 'term' entries are allowed here");
      field_terms.emplace_back(field, value);
    } else if (section == "gauge_function") {
      if (key != "term") throw ConfigError(field, "only 'term' entries are allowed here");
      gauge_terms.push_back(value);
    } else if (section == "initial") {
      if (key != "state") throw ConfigError(field, "only 'state' is allowed here");
      initial_line = value;
    } else if (section == "observables") {
      if (key != "observable") throw ConfigError(field, "only 'observable' entries are allowed");
      cfg.observables.push_back(value);
    } else if (section == "run") {
      if (key == "T") cfg.total_time = parse_double(value, field);
      else if (key == "dt") { cfg.dt = parse_double(value, field); have_dt = true; }
      else if (key == "include_a2") cfg.include_a2 = parse_bool(value, field);
      else if (key == "solver") {
        if (value == "crank_nicolson") cfg.solver = PropagatorMethod::crank_nicolson;
        else if (value == "midpoint_exponential") cfg.solver = PropagatorMethod::midpoint_exponential;
        else throw ConfigError(field, "unknown solver '" + value + "'");
      } else if (key == "scheme") {
        if (value == "left_endpoint") cfg.scheme = StepRule::left_endpoint;
        else if (value == "midpoint") cfg.scheme = StepRule::midpoint;
        else throw ConfigError(field, "unknown scheme '" + value + "'");
      } else if (key == "euler_dt") cfg.euler_dt = parse_double(value, field);
      else if (key == "euler_steps") cfg.euler_steps = parse_int(value, field);
      else if (key == "poisson_t") cfg.poisson_t = parse_double(value, field);
      else throw ConfigError(field, "unknown key");
    } else {
      throw ConfigError(origin, "unknown section [" + section + "]");
    }
  }

  // cross-field validation
  try {
    cfg.constants.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("constants", e.what());
  }
  if (!(cfg.omega0 > 0.0)) throw ConfigError("basis.omega0", "must be positive");
  if (cfg.n_max < 4) throw ConfigError("basis.n_max", "must be at least 4");
  int ndim = (cfg.kind == BasisKind::ho1d) ? 1 : 2;

  cfg.field = GaugeField::empty(ndim);
  for (const auto& [field, value] : field_terms) {
    TermParts parts = parse_term(value, ndim, true, field);
    if (parts.component == "phi1") {
      cfg.field.phi1.terms.push_back(SeparableTerm{parts.poly, parts.profile});
    } else if (parts.component == "a1_x") {
      cfg.field.a1[0].terms.push_back(SeparableTerm{parts.poly, parts.profile});
    } else if (parts.component == "a1_y") {
      if (ndim < 2) throw ConfigError(field, "a1_y needs a 2D basis");
      cfg.field.a1[1].terms.push_back(SeparableTerm{parts.poly, parts.profile});
    } else {
      throw ConfigError(field, "component must be phi1, a1_x or a1_y");
    }
  }
  cfg.field.canonicalize();
  try {
    cfg.field.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("field.term", e.what());
  }

  if (!gauge_terms.empty()) {
    GaugeFunction gf;
    gf.ndim = ndim;
    for (const std::string& value : gauge_terms) {
      TermParts parts = parse_term(value, ndim, false, "gauge_function.term");
      gf.f.terms.push_back(SeparableTerm{parts.poly, parts.profile});
    }
    gf.f.canonicalize();
    cfg.gauge_function = std::move(gf);
  }

  if (!initial_line.empty()) {
    std::vector<std::string> toks = split_ws(initial_line);
    if (toks.empty()) throw ConfigError("initial.state", "empty state");
    if (toks[0] == "eigen") {
      if (toks.size() < 2 || toks.size() > 3) {
        throw ConfigError("initial.state", "eigen needs n and optionally m_ang");
      }
      cfg.initial_is_eigen = true;
      cfg.initial_n = parse_int(toks[1], "initial.state");
      cfg.initial_m = toks.size() == 3 ? parse_int(toks[2], "initial.state") : 0;
    } else if (toks[0] == "coeffs") {
      if (toks.size() != 2) throw ConfigError("initial.state", "coeffs needs [(idx,re,im),...]");
      cfg.initial_is_eigen = false;
      std::string s = toks[1];
      if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
        throw ConfigError("initial.state", "coeffs needs [(idx,re,im),...]");
      }
      s = s.substr(1, s.size() - 2);
      std::size_t i = 0;
      while (i < s.size()) {
        if (s[i] == ',') { ++i; continue; }
        if (s[i] != '(') throw ConfigError("initial.state", "expected '('");
        std::size_t close = s.find(')', i);
        if (close == std::string::npos) throw ConfigError("initial.state", "unbalanced '('");
        std::string group = s.substr(i + 1, close - i - 1);
        std::vector<std::string> nums;
        std::string cur;
        for (char ch : group) {
          if (ch == ',') { nums.push_back(cur); cur.clear(); }
          else cur.push_back(ch);
        }
        nums.push_back(cur);
        if (nums.size() != 3) throw ConfigError("initial.state", "entries need (idx,re,im)");
        cfg.initial_coeffs.emplace_back(parse_int(nums[0], "initial.state"),
                                        parse_double(nums[1], "initial.state"),
                                        parse_double(nums[2], "initial.state"));
        i = close + 1;
      }
      if (cfg.initial_coeffs.empty()) throw ConfigError("initial.state", "no coefficients");
    } else {
      throw ConfigError("initial.state", "state must start with eigen or coeffs");
    }
  }

  for (const std::string& name : cfg.observables) {
    if (name != "energy" && name != "lz" && name != "lz2" && name != "qx" && name != "qy") {
      throw ConfigError("observables.observable", "unknown observable '" + name + "'");
    }
    if ((name == "lz" || name == "lz2" || name == "qy") && ndim < 2) {
      throw ConfigError("observables.observable", "'" + name + "' needs a 2D basis");
    }
  }

  if (!(cfg.total_time > 0.0)) throw ConfigError("run.T", "must be positive");
  if (!have_dt || !(cfg.dt > 0.0)) throw ConfigError("run.dt", "must be positive");
  if (cfg.euler_dt < 0.0) throw ConfigError("run.euler_dt", "must be nonnegative");
  if (cfg.euler_steps < 1) throw ConfigError("run.euler_steps", "must be at least 1");
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

}  // namespace qdyn
