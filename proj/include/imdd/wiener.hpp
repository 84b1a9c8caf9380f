#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

#include "imdd/statistics.hpp"

namespace imdd {

enum class FilterVariant { matched, mismatched, naive };

inline const char* variant_name(FilterVariant v) {
  switch (v) {
    case FilterVariant::matched: return "matched";
    case FilterVariant::mismatched: return "mismatched";
    case FilterVariant::naive: return "naive";
  }
  return "?";
}

inline FilterVariant variant_from_name(const std::string& s) {
  if (s == "matched") return FilterVariant::matched;
  if (s == "mismatched") return FilterVariant::mismatched;
  if (s == "naive") return FilterVariant::naive;
  throw std::invalid_argument("unknown filter variant: " + s);
}

/// Affine estimator s_hat = Re{ g^T u + g_m }. Taps are real for the
/// matched and mismatched variants and complex for the naive one; the
/// real part is a no-op in the real case.
struct WienerFilter {
  Eigen::VectorXcd taps;
  cdouble bias{0.0, 0.0};
  FilterVariant variant = FilterVariant::matched;

  int size() const { return static_cast<int>(taps.size()); }

  double estimate(const Eigen::VectorXd& u) const {
    return (taps.transpose() * u.cast<cdouble>()).value().real() + bias.real();
  }
};

/// Solves C x = b for symmetric positive-definite C via Cholesky, falling
/// back to a pivoted factorization with diagonal jitter 1e-12*trace(C)/K
/// when C is numerically on the PD boundary.
inline Eigen::VectorXd spd_solve(const Eigen::MatrixXd& c, const Eigen::VectorXd& b) {
  Eigen::LLT<Eigen::MatrixXd> llt(c);
  if (llt.info() == Eigen::Success) {
    Eigen::VectorXd x = llt.solve(b);
    if (x.allFinite()) return x;
  }
  Eigen::MatrixXd cj = c;
  cj.diagonal().array() += 1e-12 * c.trace() / static_cast<double>(c.rows());
  Eigen::LDLT<Eigen::MatrixXd> ldlt(cj);
  if (ldlt.info() == Eigen::Success) {
    Eigen::VectorXd x = ldlt.solve(b);
    // LDLT quietly pseudo-solves rank-deficient systems; verify the
    // residual so inconsistent right-hand sides surface as an error
    const double resid = (cj * x - b).norm();
    const double scale = cj.norm() * x.norm() + b.norm();
    if (x.allFinite() && resid <= 1e-8 * scale) return x;
  }
  throw std::runtime_error("spd_solve: covariance matrix is singular");
}

/// Generic affine MMSE solution from precomputed statistics:
/// g^T = c_su C_uu^-1, g_m = mu_s - g^T mu_u.
inline WienerFilter solve_wf(const OutputStats& stats, double mu_s) {
  WienerFilter f;
  f.variant = FilterVariant::matched;
  if (stats.c_su.isZero(0.0)) {
    // uncorrelated observations: the estimator collapses to the prior mean
    f.taps = Eigen::VectorXcd::Zero(stats.mu_u.size());
    f.bias = cdouble(mu_s, 0.0);
    return f;
  }
  const Eigen::VectorXd g = spd_solve(stats.c_uu, stats.c_su);
  f.taps = g.cast<cdouble>();
  f.bias = cdouble(mu_s - g.dot(stats.mu_u), 0.0);
  return f;
}

/// Exact-statistics filter for a symmetric alphabet driving the square-law
/// channel directly. Estimates the data symbol itself; Eqs. of the output
/// statistics are exact for this law, so the analytic mean-square error
/// sigma^2 - c C^-1 c^T is the true one.
inline WienerFilter matched_wf(const StatsKernel& kr, const Constellation& breve, double sigma_eta2) {
  WienerFilter f = solve_wf(output_stats(kr, moments_of(breve), sigma_eta2), breve.mean);
  f.variant = FilterVariant::matched;
  return f;
}

inline WienerFilter matched_wf(const ConvOperator& op, const Constellation& breve, double sigma_eta2) {
  return matched_wf(StatsKernel(op), breve, sigma_eta2);
}

/// Filter for the sqrt-predistorted transmitter, designed under the
/// first-order linearization of the square root around the alphabet mean.
/// The substituted moments feed the same closed-form statistics; the
/// resulting taps are rescaled by 1/alpha and the bias targets the
/// pre-distortion symbol.
inline WienerFilter mismatched_wf(const StatsKernel& kr, const Constellation& breve,
                                  double sigma_eta2) {
  if (!(breve.mean > 0.0)) throw std::domain_error("mismatched_wf: alphabet mean must be > 0");
  const TaylorCoeffs t = taylor_coeffs(breve.mean);
  const OutputStats stats = output_stats(kr, taylor_substituted(breve), sigma_eta2);
  WienerFilter f;
  f.variant = FilterVariant::mismatched;
  if (stats.c_su.isZero(0.0)) {
    f.taps = Eigen::VectorXcd::Zero(stats.mu_u.size());
    f.bias = cdouble(breve.mean, 0.0);
    return f;
  }
  const Eigen::VectorXd g = spd_solve(stats.c_uu, stats.c_su) / t.alpha;
  f.taps = g.cast<cdouble>();
  f.bias = cdouble(breve.mean - g.dot(stats.mu_u), 0.0);
  return f;
}

inline WienerFilter mismatched_wf(const ConvOperator& op, const Constellation& breve,
                                  double sigma_eta2) {
  return mismatched_wf(StatsKernel(op), breve, sigma_eta2);
}

/// Baseline that models the link as linear, u = Psi s + eta, ignoring the
/// square-law detector entirely. Solves the complex normal equations; the
/// real part is taken on the estimate, not the taps.
inline WienerFilter naive_wf(const ConvOperator& op, const Constellation& breve, double sigma_eta2) {
  const int k = op.rows();
  WienerFilter f;
  f.variant = FilterVariant::naive;
  if (breve.variance == 0.0) {
    f.taps = Eigen::VectorXcd::Zero(k);
    f.bias = cdouble(breve.mean, 0.0);
    return f;
  }
  Eigen::MatrixXcd c = breve.variance * (op.psi * op.psi.adjoint());
  c.diagonal().array() += sigma_eta2;
  // g^T = c_su C^-1 with c_su = var * (Psi e)^H  =>  C conj(g) = var * Psi e
  Eigen::LLT<Eigen::MatrixXcd> llt(c);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("naive_wf: covariance matrix is singular");
  const Eigen::VectorXcd x = llt.solve(breve.variance * op.psi.col(op.target_col));
  if (!x.allFinite()) throw std::runtime_error("naive_wf: covariance matrix is singular");
  f.taps = x.conjugate();
  const Eigen::VectorXcd mu_u = breve.mean * op.psi.rowwise().sum();
  f.bias = cdouble(breve.mean, 0.0) - (f.taps.transpose() * mu_u).value();
  return f;
}

/// Error-to-signal power ratio 1 - c C^-1 c^T / sigma_b^2 of the
/// predistorted-transmitter filter, evaluated in the linearized frame
/// (equivalently, the cross-covariance carries a 1/alpha so that it
/// approximates the covariance between the pre-distortion symbol and u).
inline double analytic_esr(const StatsKernel& kr, const Constellation& breve, double sigma_eta2) {
  if (!(breve.variance > 0.0)) throw std::domain_error("analytic_esr: zero-variance alphabet");
  const SymbolMoments m = taylor_substituted(breve);
  const OutputStats stats = output_stats(kr, m, sigma_eta2);
  const double quad = stats.c_su.dot(spd_solve(stats.c_uu, stats.c_su));
  return 1.0 - quad / m.variance;
}

inline double analytic_esr(const ConvOperator& op, const Constellation& breve, double sigma_eta2) {
  return analytic_esr(StatsKernel(op), breve, sigma_eta2);
}

/// Exact counterpart for the matched variant (symbols transmitted without
/// predistortion): 1 - c C^-1 c^T / sigma_b^2 with the alphabet's own
/// moments.
inline double matched_esr(const StatsKernel& kr, const Constellation& breve, double sigma_eta2) {
  if (!(breve.variance > 0.0)) throw std::domain_error("matched_esr: zero-variance alphabet");
  const OutputStats stats = output_stats(kr, moments_of(breve), sigma_eta2);
  const double quad = stats.c_su.dot(spd_solve(stats.c_uu, stats.c_su));
  return 1.0 - quad / breve.variance;
}

inline double matched_esr(const ConvOperator& op, const Constellation& breve, double sigma_eta2) {
  return matched_esr(StatsKernel(op), breve, sigma_eta2);
}

/// ESR the naive filter believes it achieves under its linear model. Not
/// an estimate of the realized error; reported for completeness.
inline double naive_model_esr(const ConvOperator& op, const Constellation& breve,
                              double sigma_eta2) {
  if (!(breve.variance > 0.0)) throw std::domain_error("naive_model_esr: zero-variance alphabet");
  Eigen::MatrixXcd c = breve.variance * (op.psi * op.psi.adjoint());
  c.diagonal().array() += sigma_eta2;
  Eigen::LLT<Eigen::MatrixXcd> llt(c);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("naive_model_esr: covariance matrix is singular");
  const Eigen::VectorXcd e = op.psi.col(op.target_col);
  const double quad = (breve.variance * breve.variance * e.adjoint() * llt.solve(e)).value().real();
  return 1.0 - quad / breve.variance;
}

}  // namespace imdd
