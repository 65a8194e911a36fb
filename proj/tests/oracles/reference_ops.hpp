#ifndef FRACAVITY_TESTS_REFERENCE_OPS_HPP
#define FRACAVITY_TESTS_REFERENCE_OPS_HPP

// Independent reference implementations used as test oracles. These stay
// deliberately naive (dense sums, finite differences, closed forms) and do
// not reuse the library's FFT factorizations.

#include <complex>
#include <numbers>
#include <vector>

#include "fracavity/cavity.hpp"
#include "fracavity/grid.hpp"

namespace test_oracle {

using fracavity::cplx;
using fracavity::Field;
using fracavity::Grid1D;

// Closed-form free evolution of a normalized Gaussian under
// i dpsi/dt = -D2 d^2 psi/dx^2:
//   psi(x,t) = (2/(pi w0^2))^(1/4) z^(-1/2) exp(-x^2/(w0^2 z)),
//   z = 1 + 4 i D2 t / w0^2
inline Field free_gaussian_evolution(const Grid1D& grid, double w0, double d2, double t) {
  const cplx z(1.0, 4.0 * d2 * t / (w0 * w0));
  const cplx pref = std::pow(2.0 / (std::numbers::pi * w0 * w0), 0.25) / std::sqrt(z);
  Field out(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    out[j] = pref * std::exp(-x * x / (w0 * w0 * z));
  }
  return out;
}

// Centered second difference, Dirichlet ends.
inline std::vector<cplx> second_difference(const std::vector<cplx>& v, double dx) {
  const std::size_t n = v.size();
  std::vector<cplx> out(n, cplx(0.0, 0.0));
  for (std::size_t j = 1; j + 1 < n; ++j)
    out[j] = (v[j - 1] - 2.0 * v[j] + v[j + 1]) / (dx * dx);
  return out;
}

// Direct quadrature of the round-trip kernel: the n x n matrix
//   K[j][l] = prefactor(x_j) * (1/lambda f) sum_m mask(xi_m)
//             exp(2 pi i xi_m (x_j - x_l)/(lambda f)) dxi dx
// applied by plain summation. O(n^3) precompute; for small grids only.
inline std::vector<std::vector<cplx>> dense_round_trip_matrix(
    const fracavity::CavityConfig& config, const Grid1D& gamma) {
  const Grid1D q = fracavity::fourier_plane_grid(gamma, config.lambda, config.f);
  const std::size_t n = gamma.size();
  const double lf = config.lambda * config.f;
  const double two_pi = 2.0 * std::numbers::pi;

  std::vector<cplx> mask(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double ph =
        (config.beta == 0.0) ? 0.0 : -config.beta * std::pow(std::abs(q.x(m)), config.alpha);
    mask[m] = cplx(std::cos(ph), std::sin(ph));
  }
  const std::vector<double> v = config.mirror_potential().sample(gamma);
  std::vector<double> g(n, 0.0);
  if (config.pump) g = fracavity::gain_profile(*config.pump, gamma);
  const double root_t = std::sqrt(config.transmittance);

  std::vector<std::vector<cplx>> k(n, std::vector<cplx>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const cplx pref =
        root_t * std::exp(g[j]) * cplx(std::cos(-v[j]), std::sin(-v[j]));
    for (std::size_t l = 0; l < n; ++l) {
      cplx acc(0.0, 0.0);
      for (std::size_t m = 0; m < n; ++m) {
        const double ph = two_pi * q.x(m) * (gamma.x(j) - gamma.x(l)) / lf;
        acc += mask[m] * cplx(std::cos(ph), std::sin(ph));
      }
      k[j][l] = pref * acc * (q.dx() * gamma.dx() / lf);
    }
  }
  return k;
}

inline std::vector<cplx> apply_dense(const std::vector<std::vector<cplx>>& m,
                                     const std::vector<cplx>& v) {
  const std::size_t n = m.size();
  std::vector<cplx> out(n, cplx(0.0, 0.0));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l) out[j] += m[j][l] * v[l];
  return out;
}

// Round-trip ABCD analysis of the y cavity seen from the Fourier plane
// (mid-cavity): 2f to the flat end, back, 2f to the spherical mirror,
// reflect, 2f back. Returns the self-consistent Gaussian beam there.
struct AbcdBeam {
  double w;        // spot size, um
  double radius;   // curvature magnitude, um
};

inline AbcdBeam y_cavity_abcd(double lambda, double f, double R) {
  // M = F(2f) * Mirror(R) * F(6f); flat mirror is the identity
  const double m00 = 1.0, m01 = 6.0 * f, m10 = 0.0, m11 = 1.0;  // F(6f)
  const double r00 = 1.0, r01 = 0.0, r10 = -2.0 / R, r11 = 1.0;
  // Mirror * F(6f)
  const double a1 = r00 * m00 + r01 * m10, b1 = r00 * m01 + r01 * m11;
  const double c1 = r10 * m00 + r11 * m10, d1 = r10 * m01 + r11 * m11;
  // F(2f) * (...)
  const double A = a1 + 2.0 * f * c1, B = b1 + 2.0 * f * d1;
  const double C = c1, D = d1;
  // self-consistent q: C q^2 + (D - A) q - B = 0
  const double disc = (D - A) * (D - A) + 4.0 * B * C;
  const std::complex<double> root = std::sqrt(std::complex<double>(disc, 0.0));
  std::complex<double> qpar = (-(D - A) + root) / (2.0 * C);
  if (qpar.imag() < 0.0) qpar = std::conj(qpar);
  const std::complex<double> inv = 1.0 / qpar;
  return {std::sqrt(-lambda / (std::numbers::pi * inv.imag())),
          std::abs(1.0 / inv.real())};
}

}  // namespace test_oracle

#endif  // FRACAVITY_TESTS_REFERENCE_OPS_HPP
