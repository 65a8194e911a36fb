#ifndef FRACAVITY_GRID_HPP
#define FRACAVITY_GRID_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <vector>

#include "fracavity/errors.hpp"
#include "fracavity/fft.hpp"

namespace fracavity {

// Uniform 1D sampling grid together with its conjugate (angular-frequency)
// grid. Lengths are micrometers throughout the library; conjugate
// frequencies are rad/um in standard FFT ordering. Immutable once built,
// cheap to copy, freely shareable across threads.
class Grid1D {
 public:
  Grid1D(double x_min, double x_max, std::size_t n) : x_min_(x_min), x_max_(x_max), n_(n) {
    if (!(x_max > x_min)) throw ConfigError("Grid1D: x_max must exceed x_min");
    if (!is_power_of_two(n) || n < 2)
      throw ConfigError("Grid1D: sample count must be a power of two >= 2");
    dx_ = (x_max - x_min) / static_cast<double>(n);
    if (!(dx_ > 0.0) || !std::isfinite(dx_)) throw ConfigError("Grid1D: degenerate spacing");
  }

  // Symmetric grid of half-width `half` with samples at (j - n/2) * dx.
  static Grid1D symmetric(double half, std::size_t n) { return Grid1D(-half, half, n); }

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t size() const { return n_; }
  double dx() const { return dx_; }
  double length() const { return x_max_ - x_min_; }

  double x(std::size_t j) const { return x_min_ + static_cast<double>(j) * dx_; }

  // Conjugate angular frequency of FFT bin k: 2*pi*k/(n*dx) folded to
  // (-pi/dx, pi/dx]. Bin n/2 maps to +pi/dx (Nyquist).
  double p(std::size_t k) const {
    const double dp = 2.0 * std::numbers::pi / (static_cast<double>(n_) * dx_);
    const auto half = n_ / 2;
    const double idx = (k <= half) ? static_cast<double>(k)
                                   : static_cast<double>(k) - static_cast<double>(n_);
    return dp * idx;
  }

  std::vector<double> x_values() const {
    std::vector<double> v(n_);
    for (std::size_t j = 0; j < n_; ++j) v[j] = x(j);
    return v;
  }

  std::vector<double> p_values() const {
    std::vector<double> v(n_);
    for (std::size_t k = 0; k < n_; ++k) v[k] = p(k);
    return v;
  }

  bool operator==(const Grid1D& o) const {
    return x_min_ == o.x_min_ && x_max_ == o.x_max_ && n_ == o.n_;
  }
  bool operator!=(const Grid1D& o) const { return !(*this == o); }

 private:
  double x_min_, x_max_;
  std::size_t n_;
  double dx_;
};

// Complex transverse field envelope sampled on a Grid1D. Owns its samples.
class Field {
 public:
  Field(Grid1D grid, std::vector<cplx> samples) : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size())
      throw ConfigError("Field: sample count does not match grid");
  }

  explicit Field(Grid1D grid) : grid_(grid), samples_(grid.size(), cplx(0.0, 0.0)) {}

  const Grid1D& grid() const { return grid_; }
  std::size_t size() const { return samples_.size(); }

  cplx& operator[](std::size_t j) { return samples_[j]; }
  const cplx& operator[](std::size_t j) const { return samples_[j]; }

  std::vector<cplx>& samples() { return samples_; }
  const std::vector<cplx>& samples() const { return samples_; }

 private:
  Grid1D grid_;
  std::vector<cplx> samples_;
};

// sqrt(sum |psi_j|^2 dx)
inline double norm_l2(const Field& f) {
  double acc = 0.0;
  for (const cplx& v : f.samples()) acc += std::norm(v);
  return std::sqrt(acc * f.grid().dx());
}

// <a, b> = sum conj(a_j) b_j dx
inline cplx inner_product(const Field& a, const Field& b) {
  if (a.grid() != b.grid()) throw ConfigError("inner_product: grid mismatch");
  cplx acc(0.0, 0.0);
  for (std::size_t j = 0; j < a.size(); ++j) acc += std::conj(a[j]) * b[j];
  return acc * a.grid().dx();
}

inline void scale(Field& f, cplx s) {
  for (cplx& v : f.samples()) v *= s;
}

inline Field normalized(Field f) {
  const double n = norm_l2(f);
  if (n > 0.0) scale(f, cplx(1.0 / n, 0.0));
  return f;
}

// Spatial reflection x -> -x on the periodic index map j -> (n - j) mod n.
// Exact for the DFT's implied periodization of a symmetric grid.
inline Field parity_reversed(const Field& f) {
  const std::size_t n = f.size();
  Field out(f.grid());
  out[0] = f[0];
  for (std::size_t j = 1; j < n; ++j) out[j] = f[n - j];
  return out;
}

// In-place projection onto the even (+1) or odd (-1) parity sector.
inline void project_parity(Field& f, int sign) {
  const std::size_t n = f.size();
  auto& s = f.samples();
  s[0] = (sign > 0) ? s[0] : cplx(0.0, 0.0);
  for (std::size_t j = 1; j <= n - 1 - j; ++j) {
    const std::size_t k = n - j;
    const cplx a = s[j], b = s[k];
    if (sign > 0) {
      const cplx m = 0.5 * (a + b);
      s[j] = m;
      s[k] = m;
    } else {
      const cplx m = 0.5 * (a - b);
      s[j] = m;
      s[k] = -m;
    }
  }
  if (n % 2 == 0) {
    // self-paired Nyquist-index sample j = n/2
    if (sign < 0) s[n / 2] = cplx(0.0, 0.0);
  }
}

// Unitary DFT pair (1/sqrt(n) both directions) so Parseval holds as-is.
inline void fft_unitary(const FftPlan& plan, std::vector<cplx>& v) {
  plan.forward(v);
  const double s = 1.0 / std::sqrt(static_cast<double>(plan.size()));
  for (cplx& z : v) z *= s;
}

inline void ifft_unitary(const FftPlan& plan, std::vector<cplx>& v) {
  plan.backward(v);
  const double s = 1.0 / std::sqrt(static_cast<double>(plan.size()));
  for (cplx& z : v) z *= s;
}

}  // namespace fracavity

#endif  // FRACAVITY_GRID_HPP
