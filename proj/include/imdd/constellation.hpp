#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace imdd {

/// Unipolar PAM alphabet with uniform probabilities and cached central
/// moments. Amplitudes are in optical-power units; all points must be
/// nonnegative so that a square-law detector can recover them without
/// sign ambiguity.
struct Constellation {
  std::vector<double> points;  // strictly increasing unless the span is zero
  double prob = 0.0;           // 1/Q
  double mean = 0.0;
  double variance = 0.0;
  double mu4 = 0.0;            // fourth central moment

  int order() const { return static_cast<int>(points.size()); }
};

inline Constellation make_constellation(std::vector<double> points) {
  if (points.empty()) throw std::invalid_argument("constellation: no points");
  Constellation c;
  c.points = std::move(points);
  c.prob = 1.0 / static_cast<double>(c.points.size());
  double s = 0.0;
  for (double p : c.points) s += p;
  c.mean = s * c.prob;
  double v = 0.0, q = 0.0;
  for (double p : c.points) {
    const double d = p - c.mean;
    v += d * d;
    q += d * d * d * d;
  }
  c.variance = v * c.prob;
  c.mu4 = q * c.prob;
  return c;
}

/// Equal-spaced unipolar PAM with mean p_tx_opt and total span `span`:
/// point_i = p_tx_opt - span/2 + i*span/(Q-1). span = 0 gives the
/// degenerate single-amplitude alphabet.
inline Constellation build_pam(int order, double p_tx_opt, double span) {
  if (order < 2) throw std::invalid_argument("build_pam: order must be >= 2");
  if (!(p_tx_opt > 0.0)) throw std::invalid_argument("build_pam: p_tx_opt must be > 0");
  if (span < 0.0 || span > 2.0 * p_tx_opt)
    throw std::invalid_argument("build_pam: span must lie in [0, 2*p_tx_opt]");
  std::vector<double> pts(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i)
    pts[static_cast<std::size_t>(i)] =
        p_tx_opt - span / 2.0 + static_cast<double>(i) * span / static_cast<double>(order - 1);
  return make_constellation(std::move(pts));
}

/// Element-wise square root of the alphabet, with moments recomputed over
/// the transformed points. Squaring the result recovers the input exactly.
inline Constellation predistort(const Constellation& c) {
  std::vector<double> pts;
  pts.reserve(c.points.size());
  for (double p : c.points) {
    if (p < 0.0) throw std::domain_error("predistort: negative point " + std::to_string(p));
    pts.push_back(std::sqrt(p));
  }
  return make_constellation(std::move(pts));
}

/// First-order linearization of sqrt around a positive mean:
/// sqrt(x) ~ alpha*x + beta with alpha = 1/(2 sqrt(m)), beta = sqrt(m)/2.
/// alpha*beta == 1/4 for every valid input.
struct TaylorCoeffs {
  double alpha = 0.0;
  double beta = 0.0;
};

inline TaylorCoeffs taylor_coeffs(double mean_breve) {
  if (!(mean_breve > 0.0)) throw std::domain_error("taylor_coeffs: mean must be > 0");
  const double r = std::sqrt(mean_breve);
  return {1.0 / (2.0 * r), r / 2.0};
}

}  // namespace imdd
