#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

#include "imdd/channel.hpp"
#include "imdd/rng.hpp"

namespace imdd {

/// Parity-decimated convolution operator: K observation samples expressed
/// as a K x N' matrix acting on the N' symbols that overlap the
/// observation window. Column target_col multiplies the symbol being
/// estimated.
struct ConvOperator {
  Eigen::MatrixXcd psi;  // K x N'
  int cir_len = 0;       // M, taps of the underlying impulse response
  int m_prime = 0;       // floor((M-1)/2)
  int k_prime = 0;       // floor((K-1)/2)
  int target_col = 0;    // == m_prime

  int rows() const { return static_cast<int>(psi.rows()); }
  int cols() const { return static_cast<int>(psi.cols()); }
};

/// Builds the operator for K consecutive observation samples of a channel
/// with the given taps, sampled at twice the symbol rate. The full
/// convolution matrix has K + M - 1 columns; only those aligned with
/// symbol instants (even offsets from the estimation instant) survive
/// the zero-insertion upsampling and are kept.
inline ConvOperator build_conv_operator(const std::vector<cdouble>& taps, int k_obs, int n_os = 2) {
  if (taps.empty()) throw std::invalid_argument("build_conv_operator: empty impulse response");
  if (k_obs < 1) throw std::invalid_argument("build_conv_operator: K must be >= 1");
  if (n_os != 2)
    throw std::invalid_argument("build_conv_operator: only n_os = 2 is supported (white sampled noise)");

  const int m = static_cast<int>(taps.size());
  ConvOperator op;
  op.cir_len = m;
  op.m_prime = (m - 1) / 2;
  op.k_prime = (k_obs - 1) / 2;
  op.target_col = op.m_prime;
  const int n_cols = op.m_prime + op.k_prime + 1;
  op.psi = Eigen::MatrixXcd::Zero(k_obs, n_cols);

  // Row i of the pre-decimation matrix holds the reversed taps shifted
  // right by i; kept columns are j = parity, parity+2, ... with
  // parity = (M-1) mod 2.
  const int parity = (m - 1) % 2;
  for (int col = 0; col < n_cols; ++col) {
    const int j = parity + 2 * col;
    for (int i = 0; i < k_obs; ++i) {
      const int t = j - i;  // index into the reversed tap vector
      if (t >= 0 && t < m) op.psi(i, col) = taps[static_cast<std::size_t>(m - 1 - t)];
    }
  }
  return op;
}

inline ConvOperator build_conv_operator(const Cir& cir, int k_obs, int n_os = 2) {
  return build_conv_operator(cir.taps, k_obs, n_os);
}

/// One shot of the forward square-law channel: u = |Psi s|^2 + eta with
/// iid Gaussian noise of variance sigma_eta2. Deterministic for a given
/// seed.
inline Eigen::VectorXd forward_simulate(const ConvOperator& op, const Eigen::VectorXd& symbols,
                                        double sigma_eta2, std::uint64_t seed) {
  if (symbols.size() != op.psi.cols())
    throw std::invalid_argument("forward_simulate: symbol vector length mismatch");
  if (sigma_eta2 < 0.0) throw std::invalid_argument("forward_simulate: negative noise variance");
  const Eigen::VectorXcd field = op.psi * symbols.cast<cdouble>();
  Eigen::VectorXd u = field.cwiseAbs2();
  if (sigma_eta2 > 0.0) {
    Rng rng(seed);
    const double sd = std::sqrt(sigma_eta2);
    for (Eigen::Index i = 0; i < u.size(); ++i) u(i) += sd * rng.gaussian();
  }
  return u;
}

}  // namespace imdd
