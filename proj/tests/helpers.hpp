#pragma once

#include <cmath>

#include "qdyn/basis.hpp"
#include "qdyn/gauge_field.hpp"
#include "qdyn/pulse.hpp"

namespace qtest {

inline constexpr double kPi = 3.14159265358979323846;

// B1 = eps * rect(t) along z in the symmetric gauge: A1 = eps T(t) (-y/2, x/2).
inline qdyn::GaugeField magnetic_pulse(double eps, double t1) {
  qdyn::GaugeField field = qdyn::GaugeField::empty(2);
  field.a1[0].terms.push_back({qdyn::CoordPoly::monomial(2, -0.5 * eps, 0, 1),
                               qdyn::TimeProfile::make_rect(1.0, t1)});
  field.a1[1].terms.push_back({qdyn::CoordPoly::monomial(2, 0.5 * eps, 1, 0),
                               qdyn::TimeProfile::make_rect(1.0, t1)});
  field.canonicalize();
  return field;
}

// Same pulse in the Landau gauge: A1 = eps T(t) (-y, 0).
inline qdyn::GaugeField magnetic_pulse_landau(double eps, double t1) {
  qdyn::GaugeField field = qdyn::GaugeField::empty(2);
  field.a1[0].terms.push_back({qdyn::CoordPoly::monomial(2, -eps, 0, 1),
                               qdyn::TimeProfile::make_rect(1.0, t1)});
  field.canonicalize();
  return field;
}

// E1 = e0 * rect(t) along x via the scalar potential Phi1 = -e0 x T(t).
inline qdyn::GaugeField uniform_e_scalar(double e0, double t1, int ndim = 1) {
  qdyn::GaugeField field = qdyn::GaugeField::empty(ndim);
  field.phi1.terms.push_back({qdyn::CoordPoly::monomial(ndim, -e0, 1, 0),
                              qdyn::TimeProfile::make_rect(1.0, t1)});
  field.canonicalize();
  return field;
}

// The same field via the vector potential A1_x = -c e0 min(t, t1), Phi1 = 0.
inline qdyn::GaugeField uniform_e_vector(double e0, double t1, const qdyn::Constants& constants,
                                         int ndim = 1) {
  qdyn::GaugeField field = qdyn::GaugeField::empty(ndim);
  field.a1[0].terms.push_back(
      {qdyn::CoordPoly::constant(ndim, 1.0),
       qdyn::TimeProfile::make_ramp(-constants.c_light * e0 * t1, t1)});
  field.canonicalize();
  return field;
}

// Gauge function with uniform_e_vector = uniform_e_scalar + grad f:
// f = -c e0 min(t, t1) x.
inline qdyn::GaugeFunction uniform_e_gauge_fn(double e0, double t1,
                                              const qdyn::Constants& constants, int ndim = 1) {
  qdyn::GaugeFunction f;
  f.ndim = ndim;
  f.f.terms.push_back({qdyn::CoordPoly::monomial(ndim, 1.0, 1, 0),
                       qdyn::TimeProfile::make_ramp(-constants.c_light * e0 * t1, t1)});
  f.f.canonicalize();
  return f;
}

}  // namespace qtest
