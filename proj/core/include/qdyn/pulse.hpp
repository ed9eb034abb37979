#pragma once

#include <string>
#include <vector>

namespace qdyn {

enum class ProfileKind { constant, rect, ramp, sine, cosine, linear_t };

// Scalar shape of a separable field term, value(t) = amplitude * shape(t).
//
//   constant   1 everywhere
//   rect       1 on [0, t1], 0 outside
//   ramp       t/t1 on [0, t1], 1 after, 0 before
//   sine       sin(omega_d t) on [0, t1], 0 outside
//   cosine     cos(omega_d t) on [0, t1], 0 outside
//   linear_t   t everywhere
//
// Window edges are genuine discontinuities for rect/sine/cosine; value()
// uses the closed-interval convention and value_limit() resolves sides.
struct TimeProfile {
  ProfileKind kind{ProfileKind::constant};
  double amplitude{1.0};
  double t1{0.0};       // window length for rect/ramp/sine/cosine
  double omega_d{0.0};  // drive frequency for sine/cosine

  static TimeProfile make_constant(double amplitude);
  static TimeProfile make_rect(double amplitude, double t1);
  static TimeProfile make_ramp(double amplitude, double t1);
  static TimeProfile make_sine(double amplitude, double omega_d, double t1);
  static TimeProfile make_cosine(double amplitude, double omega_d, double t1);
  static TimeProfile make_linear_t(double amplitude);

  double value(double t) const;
  // One-sided limit, from_right ? t -> t+ : t -> t-.
  double value_limit(double t, bool from_right) const;

  // Regular (pointwise) part of d/dt as another profile. Jump parts are
  // reported separately by jumps().
  TimeProfile derivative_regular() const;

  struct Jump {
    double time{0.0};
    double magnitude{0.0};  // value(t+) - value(t-)
  };
  // Discontinuities of this profile, amplitude included.
  std::vector<Jump> jumps() const;

  // True when the window boundaries lie in [0, T]; used to split quadrature
  // segments at discontinuities and kinks.
  std::vector<double> breakpoints(double T) const;

  // Same kind and shape parameters; amplitude is not compared.
  bool same_shape(const TimeProfile& other) const;

  bool has_window() const;
  std::string describe() const;
};

}  // namespace qdyn
