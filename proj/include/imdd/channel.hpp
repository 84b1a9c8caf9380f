#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "imdd/fft.hpp"

namespace imdd {

/// Fiber and front-end parameters. The transmit filter is an ideal sinc
/// with two-sided bandwidth baud_hz and unit time-domain peak; the
/// receiver samples at n_os times the symbol rate.
struct LinkParams {
  double beta2_s2_per_km = -2.168e-23;  // group-velocity dispersion
  double alpha_per_km = 0.046;          // loss (enters only the launch-power budget)
  double gamma_per_w_km = 1.27;         // Kerr coefficient (launch-power budget only)
  double length_km = 20.0;
  double baud_hz = 27e9;
  int n_os = 2;

  double symbol_period_s() const { return 1.0 / baud_hz; }
  double sample_period_s() const { return 1.0 / (baud_hz * static_cast<double>(n_os)); }
};

/// All-pass chromatic-dispersion response exp(+j*(beta2/2)*w^2*L) at the
/// given frequencies.
inline std::vector<cdouble> cd_frequency_response(const LinkParams& params,
                                                  const std::vector<double>& freqs_hz) {
  std::vector<cdouble> h;
  h.reserve(freqs_hz.size());
  const double two_pi = 2.0 * 3.141592653589793238462643383279502884;
  for (double f : freqs_hz) {
    const double w = two_pi * f;
    const double phase = 0.5 * params.beta2_s2_per_km * w * w * params.length_km;
    h.emplace_back(std::cos(phase), std::sin(phase));
  }
  return h;
}

/// Sampled combined impulse response of the transmit sinc filter and the
/// dispersive fiber, truncated to the taps at or above
/// truncation_rel * max|tap|. Taps are ordered earliest-to-latest at
/// sample period Ts/n_os; center_index marks the peak-magnitude tap.
struct Cir {
  std::vector<cdouble> taps;
  double sample_period_s = 0.0;
  int center_index = 0;
  double dense_energy = 0.0;  // sum |psi|^2 over the full sampling grid, before truncation

  int size() const { return static_cast<int>(taps.size()); }
};

/// Samples the product spectrum (brick wall of width baud_hz times the
/// dispersion phase) on a dense grid and inverse-transforms to the time
/// domain. grid_size controls both the time window and the frequency
/// resolution; the default leaves the window edges two orders of magnitude
/// below the default truncation floor.
inline Cir sample_cir(const LinkParams& params, double truncation_rel = 0.01,
                      std::size_t grid_size = std::size_t{1} << 16) {
  if (!(truncation_rel > 0.0 && truncation_rel <= 1.0))
    throw std::invalid_argument("sample_cir: truncation_rel must be in (0, 1]");
  if (!is_pow2(grid_size) || grid_size < 64)
    throw std::invalid_argument("sample_cir: grid_size must be a power of two >= 64");
  if (!(params.baud_hz > 0.0)) throw std::invalid_argument("sample_cir: baud must be > 0");
  if (params.length_km < 0.0) throw std::invalid_argument("sample_cir: negative length");
  if (params.n_os < 1) throw std::invalid_argument("sample_cir: n_os must be >= 1");

  const std::size_t n = grid_size;
  const double ts_p = params.sample_period_s();
  const double df = 1.0 / (static_cast<double>(n) * ts_p);
  const double two_pi = 2.0 * 3.141592653589793238462643383279502884;
  const double half_band = params.baud_hz / 2.0;

  // spectrum bins laid out in DFT order (bin k <-> frequency k*df wrapped);
  // bins landing exactly on the band-edge jump get the Fourier mid-value
  // (half weight), which zeroes the spurious alternating residual on the
  // even taps
  std::vector<cdouble> spec(n, cdouble(0.0, 0.0));
  const long half = static_cast<long>(n / 2);
  for (long k = -half; k < half; ++k) {
    const double f = static_cast<double>(k) * df;
    if (std::abs(f) > half_band * (1.0 + 1e-12)) continue;
    const bool on_edge = std::abs(std::abs(f) - half_band) <= 1e-9 * df;
    const double w = two_pi * f;
    const double phase = 0.5 * params.beta2_s2_per_km * w * w * params.length_km;
    const std::size_t bin = static_cast<std::size_t>((k + static_cast<long>(n)) % static_cast<long>(n));
    spec[bin] = cdouble(std::cos(phase), std::sin(phase)) / params.baud_hz;
    if (on_edge) spec[bin] *= 0.5;
  }

  fft_inplace(spec, true);  // now spec[n] = psi(t) / (N*df), time index wrapped
  const double scale = static_cast<double>(n) * df;
  std::vector<cdouble> dense(n);
  for (std::size_t i = 0; i < n; ++i)
    dense[i] = spec[(i + n / 2) % n] * scale;  // recenter so index n/2 is t = 0

  double max_mag = 0.0;
  double energy = 0.0;
  for (const auto& v : dense) {
    max_mag = std::max(max_mag, std::abs(v));
    energy += std::norm(v);
  }
  const double floor_mag = truncation_rel * max_mag;

  // time-aliasing in the window is of the order of the tap magnitude near
  // the window edges; demand a guard band well below the truncation floor
  // so taps are never silently polluted at the level being kept
  const std::size_t guard = n / 16;
  double guard_mag = 0.0;
  for (std::size_t i = 0; i < guard; ++i)
    guard_mag = std::max({guard_mag, std::abs(dense[i]), std::abs(dense[n - 1 - i])});
  if (guard_mag >= 0.25 * floor_mag)
    throw std::runtime_error(
        "sample_cir: frequency grid too coarse to reach the truncation floor; "
        "increase grid_size");

  std::size_t lo = 0, hi = n - 1;
  while (lo < n && std::abs(dense[lo]) < floor_mag) ++lo;
  while (hi > lo && std::abs(dense[hi]) < floor_mag) --hi;

  Cir cir;
  cir.taps.assign(dense.begin() + static_cast<long>(lo), dense.begin() + static_cast<long>(hi) + 1);
  cir.sample_period_s = ts_p;
  cir.dense_energy = energy;
  int center = 0;
  double best = -1.0;
  for (int i = 0; i < cir.size(); ++i) {
    const double m = std::abs(cir.taps[static_cast<std::size_t>(i)]);
    if (m > best) {
      best = m;
      center = i;
    }
  }
  cir.center_index = center;
  return cir;
}

}  // namespace imdd
