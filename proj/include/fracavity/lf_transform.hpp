#ifndef FRACAVITY_LF_TRANSFORM_HPP
#define FRACAVITY_LF_TRANSFORM_HPP

// Scaled Fourier transform of 4f optics between the near-field plane and
// the Fourier plane a focal length behind the lens:
//
//   minus kernel:  Phi(xi) =            int psi(x)   exp(-2 pi i xi x / (lambda f)) dx
//   plus  kernel:  psi(x)  = 1/(lambda f) int Phi(xi) exp(+2 pi i xi x / (lambda f)) dxi
//
// On uniform grids with dxi dx = lambda f / n both reduce exactly to a DFT
// sandwiched between linear phase ramps, so plus(minus(psi)) == psi to
// machine precision. The conjugate grid is symmetric, monotone, with
// spacing lambda f / (n dx).

#include <complex>
#include <vector>

#include "fracavity/errors.hpp"
#include "fracavity/fft.hpp"
#include "fracavity/grid.hpp"

namespace fracavity {

inline Grid1D fourier_plane_grid(const Grid1D& gamma, double lambda, double f) {
  if (!(lambda > 0.0) || !(f > 0.0)) throw ConfigError("fourier_plane_grid: lambda, f > 0");
  const double dxi = lambda * f / (static_cast<double>(gamma.size()) * gamma.dx());
  const double half = 0.5 * static_cast<double>(gamma.size()) * dxi;
  return Grid1D(-half, half, gamma.size());
}

class LfTransform {
 public:
  LfTransform(const Grid1D& gamma, double lambda, double f)
      : gamma_(gamma),
        q_(fourier_plane_grid(gamma, lambda, f)),
        lambda_f_(lambda * f),
        plan_(gamma.size()) {
    const std::size_t n = gamma_.size();
    const double two_pi = 6.283185307179586476925286766559;
    ramp_gamma_.resize(n);
    ramp_q_.resize(n);
    // xi_m x_j = xi_0 x_j + x_0 (xi_m - xi_0) + m j dxi dx, and dxi dx =
    // lambda f / n makes the last factor the plain DFT kernel. The two
    // linear terms become the ramps below; the xi_0 x_0 corner phase rides
    // along inside ramp_gamma_.
    for (std::size_t j = 0; j < n; ++j) {
      const double ph = -two_pi * q_.x_min() * gamma_.x(j) / lambda_f_;
      ramp_gamma_[j] = cplx(std::cos(ph), std::sin(ph));
    }
    for (std::size_t m = 0; m < n; ++m) {
      const double ph = -two_pi * gamma_.x_min() * (q_.x(m) - q_.x_min()) / lambda_f_;
      ramp_q_[m] = cplx(std::cos(ph), std::sin(ph));
    }
  }

  const Grid1D& gamma_grid() const { return gamma_; }
  const Grid1D& q_grid() const { return q_; }
  const FftPlan& plan() const { return plan_; }
  const std::vector<cplx>& gamma_ramp() const { return ramp_gamma_; }

  // Phi_m = dx * ramps * FFT, the minus-kernel transform. In/out buffers may
  // alias. Output lives on q_grid().
  void minus(const std::vector<cplx>& in, std::vector<cplx>& out) const {
    const std::size_t n = gamma_.size();
    work_.resize(n);
    for (std::size_t j = 0; j < n; ++j) work_[j] = in[j] * ramp_gamma_[j];
    plan_.forward(work_.data());
    out.resize(n);
    const double s = gamma_.dx();
    for (std::size_t m = 0; m < n; ++m) out[m] = work_[m] * ramp_q_[m] * s;
  }

  // psi_j = (dxi/(lambda f)) * conj ramps * inverse FFT; exact inverse of minus().
  void plus(const std::vector<cplx>& in, std::vector<cplx>& out) const {
    const std::size_t n = gamma_.size();
    work_.resize(n);
    for (std::size_t m = 0; m < n; ++m) work_[m] = in[m] * std::conj(ramp_q_[m]);
    plan_.backward(work_.data());
    out.resize(n);
    const double s = q_.dx() / lambda_f_;
    for (std::size_t j = 0; j < n; ++j) out[j] = work_[j] * std::conj(ramp_gamma_[j]) * s;
  }

 private:
  Grid1D gamma_;
  Grid1D q_;
  double lambda_f_;
  FftPlan plan_;
  std::vector<cplx> ramp_gamma_;
  std::vector<cplx> ramp_q_;
  mutable std::vector<cplx> work_;
};

}  // namespace fracavity

#endif  // FRACAVITY_LF_TRANSFORM_HPP
