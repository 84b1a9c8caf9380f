#pragma once

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <vector>

#include "imdd/fft.hpp"
#include "imdd/rng.hpp"
#include "imdd/wiener.hpp"

namespace imdd {

/// Launch-power budget: the average optical power is capped so that the
/// peak nonlinear phase rotation over the effective length stays at
/// phi_max, after which the Kerr term is neglected.
struct PowerBudget {
  double phi_max = 0.0;
  double l_eff_km = 0.0;
  double p_tx_opt_w = 0.0;
};

inline PowerBudget launch_power(const LinkParams& params, double phi_max) {
  if (phi_max < 0.0) throw std::invalid_argument("launch_power: negative phi_max");
  if (!(params.gamma_per_w_km > 0.0))
    throw std::invalid_argument("launch_power: gamma must be > 0 for the power constraint");
  PowerBudget b;
  b.phi_max = phi_max;
  b.l_eff_km = (params.alpha_per_km > 0.0)
                   ? (1.0 - std::exp(-params.alpha_per_km * params.length_km)) / params.alpha_per_km
                   : params.length_km;
  if (b.l_eff_km <= 0.0)
    throw std::domain_error("launch_power: back-to-back link leaves the power unconstrained");
  b.p_tx_opt_w = phi_max / (params.gamma_per_w_km * b.l_eff_km);
  return b;
}

/// Average power used by the sweeps: the Kerr budget where a fiber is
/// present. A back-to-back link has no nonlinear constraint, and with the
/// noise calibrated to a target SNR every result is invariant under a
/// common power scale, so unit power is used there.
inline double sweep_tx_power(const LinkParams& params, double phi_max) {
  return params.length_km > 0.0 ? launch_power(params, phi_max).p_tx_opt_w : 1.0;
}

/// Average electrical receive power per transmitted symbol slot,
/// (trace(C_uu - sigma_eta2 I) + ||mu_u||^2) / (N' * n_os). Independent of
/// the noise level by construction.
inline double electrical_receive_power(const OutputStats& stats, double sigma_eta2, int n_prime,
                                       int n_os) {
  if (n_prime < 1 || n_os < 1)
    throw std::invalid_argument("electrical_receive_power: bad normalization");
  const double tr = stats.c_uu.trace() - sigma_eta2 * static_cast<double>(stats.c_uu.rows());
  return (tr + stats.mu_u.squaredNorm()) / (static_cast<double>(n_prime) * n_os);
}

/// Noise variance hitting a target electrical SNR given fixed signal
/// statistics: sigma_eta2 = P_rx,el / 10^(target/10).
inline double calibrate_noise(const OutputStats& stats, double target_snr_el_db, int n_prime,
                              int n_os) {
  const double p = electrical_receive_power(stats, stats.sigma_eta2, n_prime, n_os);
  return p / std::pow(10.0, target_snr_el_db / 10.0);
}

/// Streaming Monte-Carlo outcome: mean-square error against the data
/// symbols, its ratio to the alphabet variance, and the per-symbol
/// estimates retained for rate evaluation.
struct McResult {
  double mse_prime = 0.0;
  double esr_empirical = 0.0;
  std::vector<double> estimates;
  std::vector<int> symbol_indices;
};

namespace detail {

constexpr long kMcBlockSymbols = 25000;

struct BlockAccum {
  double sq_err = 0.0;
  long count = 0;
  std::vector<double> estimates;
  std::vector<int> indices;
};

inline BlockAccum run_mc_block(const std::vector<cdouble>& taps, const WienerFilter& filter,
                               const Constellation& breve, bool apply_predistortion,
                               double sigma_eta2, long n_symbols, std::uint64_t seed) {
  const int m = static_cast<int>(taps.size());
  const int k = filter.size();
  const long v = n_symbols;
  Rng rng(seed);

  const int q = breve.order();
  std::vector<double> amp(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) {
    const double p = breve.points[static_cast<std::size_t>(i)];
    amp[static_cast<std::size_t>(i)] = apply_predistortion ? std::sqrt(p) : p;
  }

  std::vector<int> idx(static_cast<std::size_t>(v));
  for (long i = 0; i < v; ++i)
    idx[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(q)));

  // zero-insertion upsampling by two, then the channel convolution
  std::vector<cdouble> up(static_cast<std::size_t>(2 * v - 1), cdouble(0.0, 0.0));
  for (long i = 0; i < v; ++i)
    up[static_cast<std::size_t>(2 * i)] = amp[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
  const std::vector<cdouble> field = overlap_add_convolve(up, taps);

  std::vector<cdouble> u(field.size());
  if (sigma_eta2 > 0.0) {
    const double sd = std::sqrt(sigma_eta2);
    for (std::size_t i = 0; i < field.size(); ++i)
      u[i] = cdouble(std::norm(field[i]) + sd * rng.gaussian(), 0.0);
  } else {
    for (std::size_t i = 0; i < field.size(); ++i) u[i] = cdouble(std::norm(field[i]), 0.0);
  }

  // filter application as one more convolution: correlating u with g is a
  // convolution with the reversed taps, read out at even instants
  std::vector<cdouble> grev(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) grev[static_cast<std::size_t>(i)] = filter.taps(k - 1 - i);
  const std::vector<cdouble> filtered = overlap_add_convolve(u, grev);

  const long lo = (m - 1 + 1) / 2;             // first symbol with full channel support
  const long hi = v - 1 - (k - 1 + 1) / 2;     // last symbol whose window stays inside the stream
  BlockAccum acc;
  if (hi < lo) throw std::invalid_argument("run_monte_carlo: too few symbols for one filter span");
  acc.estimates.reserve(static_cast<std::size_t>(hi - lo + 1));
  acc.indices.reserve(static_cast<std::size_t>(hi - lo + 1));
  const double bias = filter.bias.real();
  for (long nu = lo; nu <= hi; ++nu) {
    const double est = filtered[static_cast<std::size_t>(2 * nu + k - 1)].real() + bias;
    const double truth = breve.points[static_cast<std::size_t>(idx[static_cast<std::size_t>(nu)])];
    const double err = est - truth;
    acc.sq_err += err * err;
    acc.count += 1;
    acc.estimates.push_back(est);
    acc.indices.push_back(idx[static_cast<std::size_t>(nu)]);
  }
  return acc;
}

}  // namespace detail

/// End-to-end Monte-Carlo run: n_symbols iid draws from the alphabet,
/// sqrt-predistortion for the mismatched and naive variants (the matched
/// variant transmits the symmetric alphabet directly), streaming
/// convolution with the sampled impulse response, square-law detection
/// with seeded Gaussian noise, and one estimate per symbol instant. Edge
/// symbols without full filter support are discarded. The stream is split
/// into fixed-size blocks seeded as (seed, block), so results are
/// independent of threading and block order.
inline McResult run_monte_carlo(const ConvOperator& op, const Cir& cir, const WienerFilter& filter,
                                const Constellation& breve, double sigma_eta2, long n_symbols,
                                std::uint64_t rng_seed) {
  if (filter.size() != op.rows())
    throw std::invalid_argument("run_monte_carlo: filter length does not match the operator");
  if (cir.size() != op.cir_len)
    throw std::invalid_argument("run_monte_carlo: impulse response does not match the operator");
  if (!(breve.variance > 0.0))
    throw std::domain_error("run_monte_carlo: zero-variance alphabet");
  const long min_span = (op.cir_len + 1) / 2 + (op.rows() + 1) / 2 + 1;
  if (n_symbols < min_span)
    throw std::invalid_argument("run_monte_carlo: too few symbols for one filter span");

  const bool predistorted = filter.variant != FilterVariant::matched;
  McResult r;
  long remaining = n_symbols;
  std::uint64_t block = 0;
  while (remaining > 0) {
    long take = std::min(remaining, detail::kMcBlockSymbols);
    if (take < min_span) take = remaining;  // fold a short tail into one block
    const auto acc = detail::run_mc_block(cir.taps, filter, breve, predistorted, sigma_eta2, take,
                                          derive_seed(rng_seed, 0, block));
    r.mse_prime += acc.sq_err;
    r.estimates.insert(r.estimates.end(), acc.estimates.begin(), acc.estimates.end());
    r.symbol_indices.insert(r.symbol_indices.end(), acc.indices.begin(), acc.indices.end());
    remaining -= take;
    ++block;
  }
  const double n = static_cast<double>(r.estimates.size());
  r.mse_prime /= n;
  r.esr_empirical = r.mse_prime / breve.variance;
  return r;
}

/// Mismatched-decoding lower bound on the mutual information with a
/// per-symbol Gaussian auxiliary channel fitted from the samples. Clamped
/// to [0, log2 Q]; the variance floor keeps perfectly separated estimates
/// finite.
inline double achievable_rate_lb(const std::vector<double>& estimates,
                                 const std::vector<int>& symbol_indices, int order,
                                 double var_breve) {
  if (estimates.size() != symbol_indices.size())
    throw std::invalid_argument("achievable_rate_lb: sample length mismatch");
  if (order < 2) throw std::invalid_argument("achievable_rate_lb: order must be >= 2");
  const std::size_t n = estimates.size();
  std::vector<double> sum(static_cast<std::size_t>(order), 0.0);
  std::vector<double> sum2(static_cast<std::size_t>(order), 0.0);
  std::vector<long> cnt(static_cast<std::size_t>(order), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const int c = symbol_indices[i];
    if (c < 0 || c >= order) throw std::invalid_argument("achievable_rate_lb: index out of range");
    sum[static_cast<std::size_t>(c)] += estimates[i];
    sum2[static_cast<std::size_t>(c)] += estimates[i] * estimates[i];
    cnt[static_cast<std::size_t>(c)] += 1;
  }
  std::vector<double> mean(static_cast<std::size_t>(order)), var(static_cast<std::size_t>(order));
  const double floor_var = 1e-12 * var_breve;
  for (int c = 0; c < order; ++c) {
    const auto cc = static_cast<std::size_t>(c);
    if (cnt[cc] < 100)
      throw std::runtime_error("achievable_rate_lb: fewer than 100 samples for class " +
                               std::to_string(c));
    mean[cc] = sum[cc] / static_cast<double>(cnt[cc]);
    var[cc] = std::max(sum2[cc] / static_cast<double>(cnt[cc]) - mean[cc] * mean[cc], floor_var);
  }

  double acc = 0.0;
  std::vector<double> lq(static_cast<std::size_t>(order));
  for (std::size_t i = 0; i < n; ++i) {
    double mx = -1e300;
    for (int c = 0; c < order; ++c) {
      const auto cc = static_cast<std::size_t>(c);
      const double d = estimates[i] - mean[cc];
      lq[cc] = -0.5 * std::log(var[cc]) - 0.5 * d * d / var[cc];
      mx = std::max(mx, lq[cc]);
    }
    double mix = 0.0;
    for (int c = 0; c < order; ++c) mix += std::exp(lq[static_cast<std::size_t>(c)] - mx);
    const double den = mx + std::log(mix / static_cast<double>(order));
    acc += lq[static_cast<std::size_t>(symbol_indices[i])] - den;
  }
  const double raw = acc / (static_cast<double>(n) * std::log(2.0));
  if (raw < 0.0)
    std::cerr << "achievable_rate_lb: clamping negative bound " << raw << " to 0\n";
  return std::min(std::max(raw, 0.0), std::log2(static_cast<double>(order)));
}

}  // namespace imdd
