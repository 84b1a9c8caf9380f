#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "imdd/constellation.hpp"
#include "imdd/conv_operator.hpp"

namespace imdd {

/// First, second and fourth central moments of the symbol law driving the
/// channel.
struct SymbolMoments {
  double mean = 0.0;
  double variance = 0.0;
  double mu4 = 0.0;
};

inline SymbolMoments moments_of(const Constellation& c) { return {c.mean, c.variance, c.mu4}; }

/// Moments of the linearized sqrt-predistorted law: with s ~ alpha*b + beta
/// the output law stays symmetric and its moments follow by scaling.
inline SymbolMoments taylor_substituted(const Constellation& breve) {
  const TaylorCoeffs t = taylor_coeffs(breve.mean);
  return {t.alpha * breve.mean + t.beta, t.alpha * t.alpha * breve.variance,
          t.alpha * t.alpha * t.alpha * t.alpha * breve.mu4};
}

/// Moment-independent matrices of the output-statistics expressions,
/// cached once per operator so that repeated evaluations (shaping search,
/// noise calibration) cost O(K^2) instead of O(K^2 N').
struct StatsKernel {
  Eigen::VectorXcd w;        // Psi * 1
  Eigen::VectorXcd target;   // Psi * e_target
  Eigen::VectorXd z;         // |Psi|^2 * 1  (== diag(Psi Psi^H))
  Eigen::VectorXd abs_w2;    // |w|^2
  Eigen::MatrixXd quartic;   // |Psi|^2 |Psi|^2^T
  Eigen::MatrixXd var2;      // z z^T + |Psi Psi^H|^2 + |Psi Psi^T|^2
  Eigen::MatrixXd cross;     // z|w|^2^T + |w|^2 z^T + 2Re{D* G_t D*} + 2Re{D* G_h D}
  Eigen::MatrixXd mean4;     // |w|^2 |w|^2^T
  int k = 0;
  int n_prime = 0;

  explicit StatsKernel(const ConvOperator& op) {
    const Eigen::MatrixXcd& psi = op.psi;
    k = op.rows();
    n_prime = op.cols();
    w = psi.rowwise().sum();
    target = psi.col(op.target_col);
    const Eigen::MatrixXd a2 = psi.cwiseAbs2();
    z = a2.rowwise().sum();
    abs_w2 = w.cwiseAbs2();
    quartic = a2 * a2.transpose();
    const Eigen::MatrixXcd gram_h = psi * psi.adjoint();
    const Eigen::MatrixXcd gram_t = psi * psi.transpose();
    var2 = z * z.transpose() + gram_h.cwiseAbs2() + gram_t.cwiseAbs2();
    const Eigen::MatrixXcd dc = w.conjugate().asDiagonal();
    cross = z * abs_w2.transpose() + abs_w2 * z.transpose() +
            2.0 * (dc * gram_t * dc).real() +
            2.0 * (dc * gram_h * Eigen::MatrixXcd(w.asDiagonal())).real();
    mean4 = abs_w2 * abs_w2.transpose();
  }
};

/// Closed-form statistics of the observation vector u = |Psi s|^2 + eta
/// for iid symbols from a symmetric law: cross-covariance with the target
/// symbol, mean, and covariance. All real-valued.
struct OutputStats {
  Eigen::VectorXd c_su;
  Eigen::VectorXd mu_u;
  Eigen::MatrixXd c_uu;
  Eigen::VectorXcd w;
  Eigen::VectorXd z;
  double sigma_eta2 = 0.0;
};

inline Eigen::VectorXd cross_covariance_from(const StatsKernel& kr, double mean, double variance) {
  return 2.0 * variance * mean * (kr.target.array() * kr.w.conjugate().array()).real().matrix();
}

inline Eigen::VectorXd output_mean_from(const StatsKernel& kr, double mean, double variance) {
  return variance * kr.z + mean * mean * kr.abs_w2;
}

inline Eigen::MatrixXd output_covariance_from(const StatsKernel& kr, double mean, double variance,
                                              double mu4, double sigma_eta2) {
  const double v2 = variance * variance;
  const double m2 = mean * mean;
  const Eigen::VectorXd mu_u = output_mean_from(kr, mean, variance);
  Eigen::MatrixXd c = (mu4 - 3.0 * v2) * kr.quartic + v2 * kr.var2 +
                      variance * m2 * kr.cross + m2 * m2 * kr.mean4;
  c -= mu_u * mu_u.transpose();
  c.diagonal().array() += sigma_eta2;
  return c;
}

inline OutputStats output_stats(const StatsKernel& kr, const SymbolMoments& m, double sigma_eta2) {
  if (sigma_eta2 < 0.0) throw std::invalid_argument("output_stats: negative noise variance");
  OutputStats s;
  s.c_su = cross_covariance_from(kr, m.mean, m.variance);
  s.mu_u = output_mean_from(kr, m.mean, m.variance);
  s.c_uu = output_covariance_from(kr, m.mean, m.variance, m.mu4, sigma_eta2);
  s.w = kr.w;
  s.z = kr.z;
  s.sigma_eta2 = sigma_eta2;
  return s;
}

inline OutputStats output_stats(const ConvOperator& op, const SymbolMoments& m, double sigma_eta2) {
  return output_stats(StatsKernel(op), m, sigma_eta2);
}

inline Eigen::VectorXd cross_covariance(const ConvOperator& op, double mean, double variance) {
  return cross_covariance_from(StatsKernel(op), mean, variance);
}

inline Eigen::VectorXd output_mean(const ConvOperator& op, double mean, double variance) {
  return output_mean_from(StatsKernel(op), mean, variance);
}

inline Eigen::MatrixXd output_covariance(const ConvOperator& op, double mean, double variance,
                                         double mu4, double sigma_eta2) {
  return output_covariance_from(StatsKernel(op), mean, variance, mu4, sigma_eta2);
}

}  // namespace imdd
