#include "qdyn/gauge_field.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

namespace qdyn {

void FieldComponent::canonicalize() {
  // Fold amplitudes into the polynomials so equal functions get equal
  // representations, then merge identical shapes.
  std::vector<SeparableTerm> folded;
  for (SeparableTerm t : terms) {
    t.spatial = t.spatial.scaled(t.profile.amplitude);
    t.profile.amplitude = 1.0;
    if (t.spatial.is_zero()) continue;
    folded.push_back(std::move(t));
  }
  std::sort(folded.begin(), folded.end(), [](const SeparableTerm& a, const SeparableTerm& b) {
    return std::tuple(static_cast<int>(a.profile.kind), a.profile.t1, a.profile.omega_d) <
           std::tuple(static_cast<int>(b.profile.kind), b.profile.t1, b.profile.omega_d);
  });
  std::vector<SeparableTerm> merged;
  for (SeparableTerm& t : folded) {
    if (!merged.empty() && merged.back().profile.same_shape(t.profile)) {
      merged.back().spatial = merged.back().spatial.plus(t.spatial);
    } else {
      merged.push_back(std::move(t));
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const SeparableTerm& t) { return t.spatial.is_zero(); }),
               merged.end());
  terms = std::move(merged);
}

double FieldComponent::max_window() const {
  double w = 0.0;
  for (const SeparableTerm& t : terms) {
    if (t.profile.has_window()) w = std::max(w, t.profile.t1);
  }
  return w;
}

Eigen::MatrixXcd FieldComponent::value_matrix(double t, const Basis& basis) const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(basis.dim, basis.dim);
  for (const SeparableTerm& term : terms) {
    double s = term.profile.value(t);
    if (s == 0.0) continue;
    m += s * promote(term.spatial, basis, "field term").m;
  }
  return m;
}

FieldComponent FieldComponent::time_derivative_regular() const {
  FieldComponent d;
  for (const SeparableTerm& term : terms) {
    TimeProfile dp = term.profile.derivative_regular();
    d.terms.push_back(SeparableTerm{term.spatial, dp});
  }
  d.canonicalize();
  return d;
}

std::vector<std::pair<double, CoordPoly>> FieldComponent::net_jumps() const {
  std::map<double, CoordPoly> acc;
  for (const SeparableTerm& term : terms) {
    // Jump magnitudes already carry the profile amplitude.
    for (const TimeProfile::Jump& j : term.profile.jumps()) {
      CoordPoly contrib = term.spatial.scaled(j.magnitude);
      auto it = acc.find(j.time);
      if (it == acc.end()) {
        acc.emplace(j.time, contrib);
      } else {
        it->second = it->second.plus(contrib);
      }
    }
  }
  std::vector<std::pair<double, CoordPoly>> out;
  for (auto& [time, poly] : acc) {
    if (!poly.is_zero()) out.emplace_back(time, poly);
  }
  return out;
}

bool FieldComponent::coeff_equal(const FieldComponent& other) const {
  FieldComponent a = *this;
  FieldComponent b = other;
  a.canonicalize();
  b.canonicalize();
  if (a.terms.size() != b.terms.size()) return false;
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    if (!a.terms[i].profile.same_shape(b.terms[i].profile)) return false;
    if (!a.terms[i].spatial.equals(b.terms[i].spatial)) return false;
  }
  return true;
}

FieldComponent FieldComponent::plus(const FieldComponent& other) const {
  FieldComponent r = *this;
  r.terms.insert(r.terms.end(), other.terms.begin(), other.terms.end());
  r.canonicalize();
  return r;
}

FieldComponent FieldComponent::scaled(double s) const {
  FieldComponent r = *this;
  for (SeparableTerm& t : r.terms) t.spatial = t.spatial.scaled(s);
  r.canonicalize();
  return r;
}

GaugeField GaugeField::empty(int ndim) {
  if (ndim != 1 && ndim != 2) throw std::invalid_argument("GaugeField: ndim must be 1 or 2");
  GaugeField g;
  g.ndim = ndim;
  g.a1.resize(ndim);
  return g;
}

void GaugeField::canonicalize() {
  for (FieldComponent& c : a1) c.canonicalize();
  phi1.canonicalize();
}

void GaugeField::validate() const {
  if (static_cast<int>(a1.size()) != ndim) {
    throw std::invalid_argument("GaugeField: component count does not match ndim");
  }
  auto check = [&](const FieldComponent& c, const char* who) {
    for (const SeparableTerm& t : c.terms) {
      if (t.spatial.ndim != ndim) {
        throw std::invalid_argument(std::string("GaugeField: ") + who + " ndim mismatch");
      }
      if (t.spatial.degree() > 2) {
        throw std::invalid_argument(std::string("GaugeField: ") + who + " exceeds degree 2");
      }
    }
  };
  for (const FieldComponent& c : a1) check(c, "A1");
  check(phi1, "Phi1");
}

GaugeField gauge_transform(const GaugeField& field, const GaugeFunction& f,
                           const Constants& constants) {
  if (f.ndim != field.ndim) throw std::invalid_argument("gauge_transform: ndim mismatch");
  constants.validate();
  GaugeField out = field;
  for (int i = 0; i < field.ndim; ++i) {
    FieldComponent grad_i;
    for (const SeparableTerm& t : f.f.terms) {
      CoordPoly g = t.spatial.derivative(i);
      if (g.is_zero()) continue;
      grad_i.terms.push_back(SeparableTerm{g, t.profile});
    }
    out.a1[i] = out.a1[i].plus(grad_i);
  }
  FieldComponent dfdt = f.f.time_derivative_regular();
  out.phi1 = out.phi1.plus(dfdt.scaled(-1.0 / constants.c_light));
  if (!f.f.net_jumps().empty()) out.impulsive_phi1_dropped = true;
  out.canonicalize();
  out.validate();
  return out;
}

PhysicalFields physical_fields(const GaugeField& field, const Constants& constants) {
  constants.validate();
  field.validate();
  PhysicalFields pf;
  pf.ndim = field.ndim;
  pf.e1.resize(field.ndim);
  for (int i = 0; i < field.ndim; ++i) {
    // -grad Phi1
    FieldComponent grad_phi;
    for (const SeparableTerm& t : field.phi1.terms) {
      CoordPoly g = t.spatial.derivative(i);
      if (g.is_zero()) continue;
      grad_phi.terms.push_back(SeparableTerm{g.scaled(-1.0), t.profile});
    }
    // -(1/c) dA1_i/dt, regular part; uncancelled jumps set the flag
    FieldComponent dadt = field.a1[i].time_derivative_regular();
    pf.e1[i] = grad_phi.plus(dadt.scaled(-1.0 / constants.c_light));
    if (!field.a1[i].net_jumps().empty()) pf.impulsive_e1 = true;
  }
  if (field.ndim == 2) {
    FieldComponent curl;
    for (const SeparableTerm& t : field.a1[1].terms) {
      CoordPoly g = t.spatial.derivative(0);
      if (!g.is_zero()) curl.terms.push_back(SeparableTerm{g, t.profile});
    }
    for (const SeparableTerm& t : field.a1[0].terms) {
      CoordPoly g = t.spatial.derivative(1);
      if (!g.is_zero()) curl.terms.push_back(SeparableTerm{g.scaled(-1.0), t.profile});
    }
    curl.canonicalize();
    pf.b1z = curl;
  }
  return pf;
}

}  // namespace qdyn
