#include "qdyn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qdyn/errors.hpp"

namespace qdyn {

namespace {

struct SimpsonEstimate {
  std::complex<double> integral;
  double fmax{0.0};  // largest sampled |f|, scales the cancellation floor
};

// Simpson with n panels (n even) on one smooth segment.
SimpsonEstimate simpson(const ComplexIntegrand& f, double a, double b, int n) {
  double h = (b - a) / n;
  std::complex<double> lo = f(a, EndpointSide::lower);
  std::complex<double> hi = f(b, EndpointSide::upper);
  std::complex<double> sum = lo + hi;
  double fmax = std::max(std::abs(lo), std::abs(hi));
  for (int i = 1; i < n; ++i) {
    double t = a + i * h;
    std::complex<double> v = f(t, EndpointSide::interior);
    fmax = std::max(fmax, std::abs(v));
    sum += v * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return {sum * (h / 3.0), fmax};
}

}  // namespace

std::complex<double> integrate_segment(const ComplexIntegrand& f, double a, double b,
                                       int initial_panels, const QuadraturePolicy& policy) {
  if (!(b > a)) return 0.0;
  int n = std::max(2, initial_panels);
  if (n % 2 != 0) ++n;
  SimpsonEstimate prev = simpson(f, a, b, n);
  for (int k = 0; k < policy.max_doublings; ++k) {
    n *= 2;
    SimpsonEstimate cur = simpson(f, a, b, n);
    double delta = std::abs(cur.integral - prev.integral);
    double cancel_scale = (b - a) * std::max(cur.fmax, prev.fmax);
    if (delta <= policy.rel_tol * (std::abs(cur.integral) + policy.abs_floor) ||
        delta <= policy.cancel_floor * cancel_scale) {
      return cur.integral;
    }
    prev = cur;
  }
  throw PolicyError("quadrature", "Simpson refinement did not converge on [" +
                                      std::to_string(a) + ", " + std::to_string(b) + "]");
}

std::complex<double> integrate_piecewise(const ComplexIntegrand& f, double T,
                                         const std::vector<double>& breakpoints,
                                         double reference_window, double osc_scale,
                                         const QuadraturePolicy& policy) {
  if (!(T > 0.0)) return 0.0;
  std::vector<double> edges{0.0, T};
  for (double b : breakpoints) {
    if (b > 0.0 && b < T) edges.push_back(b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  double window = reference_window > 0.0 ? reference_window : T;
  std::complex<double> total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double a = edges[i];
    double b = edges[i + 1];
    double len = b - a;
    // Baseline density from the policy, raised until oscillations are
    // resolved (several panels per radian).
    double panels = policy.min_panels_per_window * len / window;
    panels = std::max(panels, 4.0 * std::abs(osc_scale) * len / 3.141592653589793);
    int n = std::max(16, static_cast<int>(std::ceil(panels)));
    total += integrate_segment(f, a, b, n, policy);
  }
  return total;
}

}  // namespace qdyn
