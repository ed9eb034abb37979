#include "qdyn/soperator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qdyn/quadrature.hpp"
#include "qdyn/quasicanon.hpp"
#include "qdyn/state.hpp"

namespace qdyn {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};
const double kNaN = std::numeric_limits<double>::quiet_NaN();
const double kInf = std::numeric_limits<double>::infinity();

struct RatePiece {
  std::complex<double> mel;
  const RateTerm* term;
};

double rate_min_window(const RateOperator& rate) { return rate.min_window(); }

std::vector<double> rate_breakpoints(const RateOperator& rate, double T) {
  std::vector<double> bp;
  auto scan = [&](const std::vector<RateTerm>& terms) {
    for (const RateTerm& t : terms) {
      for (double b : t.profile.breakpoints(T)) bp.push_back(b);
    }
  };
  scan(rate.electric);
  scan(rate.magnetic);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

double rate_max_omega_d(const RateOperator& rate) {
  double w = 0.0;
  auto scan = [&](const std::vector<RateTerm>& terms) {
    for (const RateTerm& t : terms) w = std::max(w, std::abs(t.profile.omega_d));
  };
  scan(rate.electric);
  scan(rate.magnetic);
  return w;
}

}  // namespace

SMatrix s_matrix(const ObservableSpec& spec, const PhysicalFields& fields, const Basis& basis,
                 double T) {
  if (!(T > 0.0)) throw std::invalid_argument("s_matrix: T must be positive");
  Operator l = build_observable(spec, basis);
  if (!verify_unperturbed_invariance(l, basis)) {
    throw std::invalid_argument("s_matrix: " + spec.name +
                                " is not an unperturbed motion invariant");
  }
  const int d = basis.interior_dim;
  Eigen::MatrixXcd l_int = l.m.topLeftCorner(d, d);
  double scale = l_int.cwiseAbs().maxCoeff();
  Eigen::MatrixXcd offdiag = l_int;
  offdiag.diagonal().setZero();
  if (offdiag.cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1e-300)) {
    throw std::invalid_argument("s_matrix: " + spec.name +
                                " is not diagonal in the energy basis on the interior block");
  }

  RateOperator rate = rate_operator(spec, fields, basis);
  std::vector<const RateTerm*> all_terms;
  for (const RateTerm& t : rate.electric) all_terms.push_back(&t);
  for (const RateTerm& t : rate.magnetic) all_terms.push_back(&t);

  SMatrix out;
  out.dim = d;
  out.s = Eigen::MatrixXcd::Constant(d, d, std::complex<double>(kNaN, kNaN));
  out.numerator_abs = Eigen::MatrixXd::Zero(d, d);
  out.defined.assign(d, std::vector<bool>(d, false));
  out.l_values = l_int.diagonal().real();

  const double hbar = basis.constants.hbar;
  const double gap_tol = 1e-12 * std::max(1.0, out.l_values.cwiseAbs().maxCoeff());
  const double window = rate_min_window(rate);
  const std::vector<double> bp = rate_breakpoints(rate, T);
  const double base_osc = rate_max_omega_d(rate);

  for (int k = 0; k < d; ++k) {
    for (int kp = 0; kp < d; ++kp) {
      if (k == kp) continue;
      std::vector<RatePiece> pieces;
      for (const RateTerm* t : all_terms) {
        std::complex<double> mel = t->op(k, kp);
        if (mel != 0.0) pieces.push_back(RatePiece{mel, t});
      }
      if (pieces.empty()) {
        out.numerator_abs(k, kp) = 0.0;
        double gap0 = out.l_values[k] - out.l_values[kp];
        if (std::abs(gap0) > gap_tol) {
          out.s(k, kp) = 0.0;
          out.defined[k][kp] = true;
        }
        continue;
      }
      double domega = (basis.energies[k] - basis.energies[kp]) / hbar;
      ComplexIntegrand f = [&](double t, EndpointSide side) {
        std::complex<double> sum = 0.0;
        for (const RatePiece& p : pieces) {
          double s = (side == EndpointSide::interior)
                         ? p.term->profile.value(t)
                         : p.term->profile.value_limit(t, side == EndpointSide::lower);
          if (s != 0.0) sum += p.mel * s;
        }
        return sum * std::exp(kI * (domega * t));
      };
      std::complex<double> integral =
          integrate_piecewise(f, T, bp, window, std::abs(domega) + base_osc);
      out.numerator_abs(k, kp) = std::abs(integral);
      double gap = out.l_values[k] - out.l_values[kp];
      if (std::abs(gap) > gap_tol) {
        out.s(k, kp) = std::exp(-kI * (domega * T)) * integral / (kI * gap);
        out.defined[k][kp] = true;
      }
    }
  }
  return out;
}

double transition_probability_s(const SMatrix& s, int n, int k) {
  if (n < 0 || n >= s.dim || k < 0 || k >= s.dim || n == k) {
    throw std::invalid_argument("transition_probability_s: bad index pair");
  }
  if (!s.defined[n][k]) {
    throw std::invalid_argument(
        "transition_probability_s: pair is degenerate in the observable; no defined entry");
  }
  return std::norm(s.s(n, k));
}

std::vector<ConsistencyRow> consistency_check(const ObservableSpec& spec_a,
                                              const ObservableSpec& spec_b,
                                              const PhysicalFields& fields, const Basis& basis,
                                              double T, double rel_tol) {
  SMatrix sa = s_matrix(spec_a, fields, basis, T);
  SMatrix sb = s_matrix(spec_b, fields, basis, T);

  auto matrix_scale = [](const SMatrix& s) {
    double m = 0.0;
    for (int i = 0; i < s.dim; ++i) {
      for (int j = 0; j < s.dim; ++j) {
        if (i == j) continue;
        m = std::max(m, s.numerator_abs(i, j));
        if (s.defined[i][j]) m = std::max(m, std::abs(s.s(i, j)));
      }
    }
    return m;
  };
  const double eps_a = 1e-12 * matrix_scale(sa);
  const double eps_b = 1e-12 * matrix_scale(sb);

  std::vector<ConsistencyRow> rows;
  for (int k = 0; k < sa.dim; ++k) {
    for (int kp = k + 1; kp < sa.dim; ++kp) {
      bool def_a = sa.defined[k][kp];
      bool def_b = sb.defined[k][kp];
      double abs_a = def_a ? std::abs(sa.s(k, kp)) : kNaN;
      double abs_b = def_b ? std::abs(sb.s(k, kp)) : kNaN;
      bool content_a = def_a ? (abs_a > eps_a) : (sa.numerator_abs(k, kp) > eps_a);
      bool content_b = def_b ? (abs_b > eps_b) : (sb.numerator_abs(k, kp) > eps_b);
      if (!content_a && !content_b) continue;

      ConsistencyRow row;
      row.k = k;
      row.kp = kp;
      if (def_a && def_b) {
        row.a_abs = abs_a;
        row.b_abs = abs_b;
        row.rel_diff = std::abs(abs_a - abs_b) / std::max(abs_a, abs_b);
        row.verdict = (row.rel_diff <= rel_tol) ? "equal" : "unequal";
      } else if (def_a != def_b) {
        // One route's construction divides by a zero eigenvalue gap while
        // the pulse still connects the pair; surface it instead of masking.
        bool a_undef = !def_a;
        double undef_num = a_undef ? sa.numerator_abs(k, kp) : sb.numerator_abs(k, kp);
        double def_abs = a_undef ? abs_b : abs_a;
        if (undef_num > (a_undef ? eps_a : eps_b)) {
          row.a_abs = a_undef ? kInf : def_abs;
          row.b_abs = a_undef ? def_abs : kInf;
          row.rel_diff = kInf;
          row.verdict = "unequal";
        } else {
          row.a_abs = a_undef ? 0.0 : def_abs;
          row.b_abs = a_undef ? def_abs : 0.0;
          row.rel_diff = 1.0;
          row.verdict = "unequal";
        }
      } else {
        row.a_abs = kInf;
        row.b_abs = kInf;
        row.rel_diff = kNaN;
        row.verdict = "undefined";
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace qdyn
