#ifndef FRACAVITY_FRACTIONAL_HPP
#define FRACAVITY_FRACTIONAL_HPP

// Spectral quantum Riesz derivative (-d^2/dx^2)^(alpha/2) and the kinetic
// split-step multiplier exp(-i D_alpha |p|^alpha dt).

#include <cmath>
#include <complex>
#include <vector>

#include "fracavity/errors.hpp"
#include "fracavity/grid.hpp"

namespace fracavity {

// Levy index alpha of the fractional kinetic operator. Laskin's fractional
// quantum mechanics covers 1 < alpha <= 2; alpha = 2 is ordinary quantum
// mechanics, alpha = 1 the massless relativistic oscillator. Values in
// (0, 1) are accepted but flagged as outside the SFQM range.
struct LevyIndex {
  double alpha;

  explicit LevyIndex(double a) : alpha(a) {
    if (!(a > 0.0) || !(a <= 2.0)) throw ConfigError("LevyIndex: alpha must be in (0, 2]");
  }
  bool outside_sfqm_range() const { return alpha <= 1.0 && alpha != 1.0; }
};

// Kinetic scale D_alpha, units (um)^alpha of phase per round trip.
// When driven by a cavity it equals beta (lambda f / 2 pi)^alpha.
struct ScaleConstant {
  double d_alpha;

  explicit ScaleConstant(double d) : d_alpha(d) {
    if (!(d >= 0.0)) throw ConfigError("ScaleConstant: d_alpha must be >= 0");
  }
};

// |p_k|^alpha on the conjugate grid. |p|^alpha at p = 0 is exactly 0 for
// every alpha > 0; the Nyquist bin uses |p| = pi/dx like any other bin.
inline std::vector<double> riesz_symbol(const Grid1D& grid, LevyIndex alpha) {
  std::vector<double> sym(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double p = std::abs(grid.p(k));
    sym[k] = (p == 0.0) ? 0.0 : std::pow(p, alpha.alpha);
  }
  return sym;
}

// (-d^2/dx^2)^(alpha/2) psi = IFFT(|p|^alpha FFT(psi))
inline Field riesz_derivative(const Field& field, LevyIndex alpha) {
  const Grid1D& g = field.grid();
  const FftPlan plan(g.size());
  const std::vector<double> sym = riesz_symbol(g, alpha);
  Field out = field;
  plan.forward(out.samples());
  for (std::size_t k = 0; k < g.size(); ++k) out[k] *= sym[k];
  plan.backward(out.samples());
  const double inv_n = 1.0 / static_cast<double>(g.size());
  for (cplx& v : out.samples()) v *= inv_n;
  return out;
}

// exp(-i d_alpha |p_k|^alpha dt) per conjugate-grid sample. Unit modulus by
// construction; dt < 0 runs the kinetic step backwards.
inline std::vector<cplx> kinetic_multiplier(const Grid1D& grid, LevyIndex alpha,
                                            ScaleConstant d_alpha, double dt) {
  const std::vector<double> sym = riesz_symbol(grid, alpha);
  std::vector<cplx> mult(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double phase = -d_alpha.d_alpha * sym[k] * dt;
    mult[k] = cplx(std::cos(phase), std::sin(phase));
  }
  return mult;
}

}  // namespace fracavity

#endif  // FRACAVITY_FRACTIONAL_HPP
