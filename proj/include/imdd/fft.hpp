#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace imdd {

using cdouble = std::complex<double>;

constexpr bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// In-place iterative radix-2 transform. Power-of-two length only; the
// inverse includes the 1/N scaling.
inline void fft_inplace(std::vector<cdouble>& x, bool inverse) {
  const std::size_t n = x.size();
  if (n <= 1) return;
  if (!is_pow2(n)) throw std::invalid_argument("fft_inplace: length must be a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }

  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * 3.141592653589793238462643383279502884 / static_cast<double>(len);
    const cdouble wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cdouble w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cdouble u = x[i + k];
        const cdouble v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }

  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : x) v *= scale;
  }
}

// Full linear convolution via block FFT (overlap-add). Output length is
// signal.size() + taps.size() - 1.
inline std::vector<cdouble> overlap_add_convolve(const std::vector<cdouble>& signal,
                                                 const std::vector<cdouble>& taps) {
  if (taps.empty()) throw std::invalid_argument("overlap_add_convolve: empty taps");
  if (signal.empty()) return {};
  const std::size_t m = taps.size();
  const std::size_t nfft = next_pow2(std::max<std::size_t>(4 * m, 1024));
  const std::size_t block = nfft - (m - 1);

  std::vector<cdouble> h(nfft, cdouble(0.0, 0.0));
  std::copy(taps.begin(), taps.end(), h.begin());
  fft_inplace(h, false);

  std::vector<cdouble> out(signal.size() + m - 1, cdouble(0.0, 0.0));
  std::vector<cdouble> buf(nfft);
  for (std::size_t start = 0; start < signal.size(); start += block) {
    const std::size_t len = std::min(block, signal.size() - start);
    std::fill(buf.begin(), buf.end(), cdouble(0.0, 0.0));
    std::copy(signal.begin() + start, signal.begin() + start + len, buf.begin());
    fft_inplace(buf, false);
    for (std::size_t i = 0; i < nfft; ++i) buf[i] *= h[i];
    fft_inplace(buf, true);
    const std::size_t tail = std::min(len + m - 1, out.size() - start);
    for (std::size_t i = 0; i < tail; ++i) out[start + i] += buf[i];
  }
  return out;
}

}  // namespace imdd
