#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "imdd/wiener.hpp"

namespace imdd {

/// Result of the constellation-span search: the normalized span
/// d = span / (2 p_tx_opt), the analytic ESR it achieves, and the shaped
/// alphabet itself.
struct ShapingResult {
  double d_norm = 0.0;
  double esr = 0.0;
  Constellation constellation;
};

namespace detail {
constexpr double kSpanFloor = 1e-4;    // zero span has undefined ESR
constexpr int kCoarseGrid = 33;
constexpr double kGoldenRelWidth = 1e-3;
constexpr double kTieTol = 1e-12;
}  // namespace detail

/// Minimizes an ESR objective over the normalized span (0, 1]: a 33-point
/// coarse grid guards against shallow local minima, then golden-section
/// refinement around the best grid point narrows the bracket to a relative
/// width of 1e-3. Ties within 1e-12 prefer the larger span. Deterministic.
inline ShapingResult optimize_span_objective(const std::function<double(double)>& esr_of_span,
                                             int order, double p_tx_opt) {
  if (order < 2) throw std::invalid_argument("optimize_span: order must be >= 2");
  if (!(p_tx_opt > 0.0)) throw std::invalid_argument("optimize_span: p_tx_opt must be > 0");

  double best_d = 0.0;
  double best_f = 0.0;
  int best_j = -1;
  for (int j = 1; j <= detail::kCoarseGrid; ++j) {
    const double d = static_cast<double>(j) / static_cast<double>(detail::kCoarseGrid);
    const double f = esr_of_span(d);
    if (best_j < 0 || f < best_f - detail::kTieTol ||
        (f <= best_f + detail::kTieTol && d > best_d)) {
      best_f = f;
      best_d = d;
      best_j = j;
    }
  }

  double a = (best_j > 1) ? static_cast<double>(best_j - 1) / detail::kCoarseGrid : detail::kSpanFloor;
  double b = (best_j < detail::kCoarseGrid) ? static_cast<double>(best_j + 1) / detail::kCoarseGrid : 1.0;

  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = esr_of_span(x1);
  double f2 = esr_of_span(x2);
  auto consider = [&](double f, double d) {
    if (f < best_f - detail::kTieTol || (f <= best_f + detail::kTieTol && d > best_d)) {
      best_f = f;
      best_d = d;
    }
  };
  consider(f1, x1);
  consider(f2, x2);
  while ((b - a) > detail::kGoldenRelWidth * b) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = esr_of_span(x1);
      consider(f1, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = esr_of_span(x2);
      consider(f2, x2);
    }
  }

  ShapingResult r;
  r.d_norm = best_d;
  r.esr = best_f;
  r.constellation = build_pam(order, p_tx_opt, 2.0 * p_tx_opt * best_d);
  return r;
}

/// Span search against the predistorted-transmitter analytic ESR (the
/// shaping objective used by the sweep's transmitter design).
inline ShapingResult optimize_span(const StatsKernel& kr, int order, double p_tx_opt,
                                   double sigma_eta2) {
  return optimize_span_objective(
      [&](double d) {
        return analytic_esr(kr, build_pam(order, p_tx_opt, 2.0 * p_tx_opt * d), sigma_eta2);
      },
      order, p_tx_opt);
}

inline ShapingResult optimize_span(const ConvOperator& op, int order, double p_tx_opt,
                                   double sigma_eta2) {
  return optimize_span(StatsKernel(op), order, p_tx_opt, sigma_eta2);
}

/// Same search against the exact-statistics ESR of the matched variant.
inline ShapingResult optimize_span_matched(const StatsKernel& kr, int order, double p_tx_opt,
                                           double sigma_eta2) {
  return optimize_span_objective(
      [&](double d) {
        return matched_esr(kr, build_pam(order, p_tx_opt, 2.0 * p_tx_opt * d), sigma_eta2);
      },
      order, p_tx_opt);
}

}  // namespace imdd
