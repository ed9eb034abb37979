#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace qdyn {

// Integrand evaluation site. Side resolves one-sided limits when t is a
// segment endpoint sitting on a discontinuity.
enum class EndpointSide { interior, lower, upper };

using ComplexIntegrand = std::function<std::complex<double>(double t, EndpointSide side)>;

struct QuadraturePolicy {
  // Baseline panel count per unit of the reference window (the shortest
  // profile window, or the whole interval when no window exists).
  int min_panels_per_window{400};
  double rel_tol{1e-9};
  double abs_floor{1e-30};
  // Convergence floor as a fraction of (b - a) * max|f|, the bound on the
  // cancellation mass. Integrals that cancel to zero never meet a purely
  // relative target; below this scale refinement only chases roundoff.
  double cancel_floor{1e-12};
  int max_doublings{14};
};

// Composite Simpson on one smooth segment, panel count doubled until the
// result moves by no more than rel_tol * (|I| + abs_floor), or by no more
// than cancel_floor * (b - a) * max|f| for cancellation-dominated integrals.
std::complex<double> integrate_segment(const ComplexIntegrand& f, double a, double b,
                                       int initial_panels, const QuadraturePolicy& policy);

// Splits [0, T] at the supplied breakpoints (discontinuities and kinks) and
// integrates each segment separately. osc_scale is the largest |angular
// frequency| present in the integrand; it raises the initial panel count so
// oscillations are resolved before the convergence test.
std::complex<double> integrate_piecewise(const ComplexIntegrand& f, double T,
                                         const std::vector<double>& breakpoints,
                                         double reference_window, double osc_scale,
                                         const QuadraturePolicy& policy = {});

}  // namespace qdyn
