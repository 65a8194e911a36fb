#ifndef FRACAVITY_FFT_HPP
#define FRACAVITY_FFT_HPP

// Iterative radix-2 complex FFT. Grids in this library are power-of-two by
// construction, so a dedicated radix-2 kernel with per-stage contiguous
// twiddle tables covers every transform the simulator performs, with
// bit-exact reproducibility across runs and thread counts.

#include <complex>
#include <cstddef>
#include <vector>

#include "fracavity/errors.hpp"

namespace fracavity {

using cplx = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n) {
    if (!is_power_of_two(n) || n < 2) {
      throw ConfigError("FftPlan: size must be a power of two >= 2");
    }
    bitrev_.resize(n);
    std::size_t log2n = 0;
    while ((std::size_t{1} << log2n) < n) ++log2n;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < log2n; ++b) r |= ((i >> b) & 1u) << (log2n - 1 - b);
      bitrev_[i] = r;
    }
    // twiddles for each stage, stored contiguously: stage with butterfly
    // span `len` holds exp(-2 pi i k/len) for k < len/2
    twiddle_.resize(n - 1);
    stage_offset_.resize(log2n);
    const double two_pi = 6.283185307179586476925286766559;
    std::size_t off = 0;
    std::size_t stage = 0;
    for (std::size_t len = 2; len <= n; len <<= 1, ++stage) {
      stage_offset_[stage] = off;
      for (std::size_t k = 0; k < len / 2; ++k) {
        const double ang = -two_pi * static_cast<double>(k) / static_cast<double>(len);
        twiddle_[off + k] = cplx(std::cos(ang), std::sin(ang));
      }
      off += len / 2;
    }
  }

  std::size_t size() const { return n_; }

  // X_m = sum_j x_j exp(-2*pi*i*m*j/n), unscaled.
  void forward(cplx* data) const { transform<false>(data); }

  // x_j = sum_m X_m exp(+2*pi*i*m*j/n), unscaled (no 1/n).
  void backward(cplx* data) const { transform<true>(data); }

  void forward(std::vector<cplx>& v) const { forward(v.data()); }
  void backward(std::vector<cplx>& v) const { backward(v.data()); }

 private:
  template <bool Inverse>
  void transform(cplx* a) const {
    const std::size_t n = n_;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = bitrev_[i];
      if (i < j) std::swap(a[i], a[j]);
    }
    std::size_t stage = 0;
    for (std::size_t len = 2; len <= n; len <<= 1, ++stage) {
      const std::size_t half = len >> 1;
      const cplx* w = twiddle_.data() + stage_offset_[stage];
      for (std::size_t start = 0; start < n; start += len) {
        cplx* lo = a + start;
        cplx* hi = lo + half;
        for (std::size_t k = 0; k < half; ++k) {
          const cplx wk = Inverse ? std::conj(w[k]) : w[k];
          const cplx odd = hi[k] * wk;
          const cplx even = lo[k];
          lo[k] = even + odd;
          hi[k] = even - odd;
        }
      }
    }
  }

  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<cplx> twiddle_;
  std::vector<std::size_t> stage_offset_;
};

}  // namespace fracavity

#endif  // FRACAVITY_FFT_HPP
