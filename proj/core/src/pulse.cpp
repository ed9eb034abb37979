#include "qdyn/pulse.hpp"

#include <cmath>
#include <stdexcept>

namespace qdyn {

namespace {

void require_window(double t1, const char* who) {
  if (!(t1 > 0.0)) throw std::invalid_argument(std::string(who) + ": t1 must be positive");
}

}  // namespace

TimeProfile TimeProfile::make_constant(double amplitude) {
  return TimeProfile{ProfileKind::constant, amplitude, 0.0, 0.0};
}

TimeProfile TimeProfile::make_rect(double amplitude, double t1) {
  require_window(t1, "TimeProfile::make_rect");
  return TimeProfile{ProfileKind::rect, amplitude, t1, 0.0};
}

TimeProfile TimeProfile::make_ramp(double amplitude, double t1) {
  require_window(t1, "TimeProfile::make_ramp");
  return TimeProfile{ProfileKind::ramp, amplitude, t1, 0.0};
}

TimeProfile TimeProfile::make_sine(double amplitude, double omega_d, double t1) {
  require_window(t1, "TimeProfile::make_sine");
  if (!(omega_d > 0.0)) throw std::invalid_argument("TimeProfile::make_sine: omega_d must be positive");
  return TimeProfile{ProfileKind::sine, amplitude, t1, omega_d};
}

TimeProfile TimeProfile::make_cosine(double amplitude, double omega_d, double t1) {
  require_window(t1, "TimeProfile::make_cosine");
  if (!(omega_d > 0.0)) throw std::invalid_argument("TimeProfile::make_cosine: omega_d must be positive");
  return TimeProfile{ProfileKind::cosine, amplitude, t1, omega_d};
}

TimeProfile TimeProfile::make_linear_t(double amplitude) {
  return TimeProfile{ProfileKind::linear_t, amplitude, 0.0, 0.0};
}

bool TimeProfile::has_window() const {
  return kind == ProfileKind::rect || kind == ProfileKind::ramp || kind == ProfileKind::sine ||
         kind == ProfileKind::cosine;
}

double TimeProfile::value(double t) const {
  switch (kind) {
    case ProfileKind::constant: return amplitude;
    case ProfileKind::linear_t: return amplitude * t;
    case ProfileKind::rect: return (t >= 0.0 && t <= t1) ? amplitude : 0.0;
    case ProfileKind::ramp:
      if (t < 0.0) return 0.0;
      return (t < t1) ? amplitude * (t / t1) : amplitude;
    case ProfileKind::sine: return (t >= 0.0 && t <= t1) ? amplitude * std::sin(omega_d * t) : 0.0;
    case ProfileKind::cosine:
      return (t >= 0.0 && t <= t1) ? amplitude * std::cos(omega_d * t) : 0.0;
  }
  return 0.0;
}

double TimeProfile::value_limit(double t, bool from_right) const {
  // Nudge off the discontinuity set {0, t1}; the profiles are piecewise
  // continuous, so the side alone decides.
  for (const Jump& j : jumps()) {
    if (t == j.time) {
      double eps = (t1 > 0.0 ? t1 : 1.0) * 1e-9;
      return value(from_right ? t + eps : t - eps);
    }
  }
  return value(t);
}

TimeProfile TimeProfile::derivative_regular() const {
  switch (kind) {
    case ProfileKind::constant: return make_constant(0.0);
    case ProfileKind::linear_t: return make_constant(amplitude);
    case ProfileKind::rect: return make_constant(0.0);
    case ProfileKind::ramp: return make_rect(amplitude / t1, t1);
    case ProfileKind::sine: return make_cosine(amplitude * omega_d, omega_d, t1);
    case ProfileKind::cosine: return make_sine(-amplitude * omega_d, omega_d, t1);
  }
  return make_constant(0.0);
}

std::vector<TimeProfile::Jump> TimeProfile::jumps() const {
  std::vector<Jump> js;
  switch (kind) {
    case ProfileKind::rect:
      js.push_back(Jump{0.0, amplitude});
      js.push_back(Jump{t1, -amplitude});
      break;
    case ProfileKind::sine: {
      double end = amplitude * std::sin(omega_d * t1);
      if (end != 0.0) js.push_back(Jump{t1, -end});
      break;
    }
    case ProfileKind::cosine: {
      js.push_back(Jump{0.0, amplitude});
      double end = amplitude * std::cos(omega_d * t1);
      if (end != 0.0) js.push_back(Jump{t1, -end});
      break;
    }
    default: break;  // constant, ramp, linear_t are continuous
  }
  return js;
}

std::vector<double> TimeProfile::breakpoints(double T) const {
  std::vector<double> bp;
  if (has_window()) {
    if (t1 > 0.0 && t1 < T) bp.push_back(t1);
  }
  return bp;
}

bool TimeProfile::same_shape(const TimeProfile& other) const {
  return kind == other.kind && t1 == other.t1 && omega_d == other.omega_d;
}

std::string TimeProfile::describe() const {
  switch (kind) {
    case ProfileKind::constant: return "constant";
    case ProfileKind::rect: return "rect";
    case ProfileKind::ramp: return "ramp";
    case ProfileKind::sine: return "sine";
    case ProfileKind::cosine: return "cosine";
    case ProfileKind::linear_t: return "linear_t";
  }
  return "?";
}

}  // namespace qdyn
