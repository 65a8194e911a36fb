#ifndef FRACAVITY_PROPAGATOR_HPP
#define FRACAVITY_PROPAGATOR_HPP

// Continuous-time split-step evolution of the space-fractional Schrodinger
// equation i dpsi/dt = D_alpha (-d^2/dx^2)^(alpha/2) psi + V(x) psi and the
// near-field -> Fourier-plane transform of the 4f cavity.

#include <cmath>
#include <complex>
#include <numbers>
#include <variant>
#include <vector>

#include "fracavity/errors.hpp"
#include "fracavity/fractional.hpp"
#include "fracavity/grid.hpp"
#include "fracavity/lf_transform.hpp"

namespace fracavity {

// Real phase per round trip, evaluated on a grid.
class Potential {
 public:
  struct PowerLaw {
    double beta;   // (um)^-alpha
    double alpha;  // exponent
  };
  struct Parabolic {
    double lambda;  // um
    double radius;  // mirror radius of curvature, um
  };
  struct Tabulated {
    std::vector<double> samples;
  };

  static Potential none() { return Potential(PowerLaw{0.0, 2.0}); }
  static Potential power_law(double beta, double alpha) {
    if (!(beta >= 0.0)) throw ConfigError("Potential: beta must be >= 0");
    return Potential(PowerLaw{beta, alpha});
  }
  static Potential parabolic(double lambda, double radius) {
    if (radius == 0.0) throw ConfigError("Potential: mirror radius must be nonzero");
    return Potential(Parabolic{lambda, radius});
  }
  static Potential tabulated(std::vector<double> samples) {
    return Potential(Tabulated{std::move(samples)});
  }

  std::vector<double> sample(const Grid1D& grid) const {
    std::vector<double> v(grid.size());
    if (const auto* pl = std::get_if<PowerLaw>(&kind_)) {
      for (std::size_t j = 0; j < grid.size(); ++j)
        v[j] = (pl->beta == 0.0) ? 0.0 : pl->beta * std::pow(std::abs(grid.x(j)), pl->alpha);
    } else if (const auto* pb = std::get_if<Parabolic>(&kind_)) {
      const double c = 2.0 * std::numbers::pi / (pb->lambda * pb->radius);
      for (std::size_t j = 0; j < grid.size(); ++j) v[j] = c * grid.x(j) * grid.x(j);
    } else {
      const auto& t = std::get<Tabulated>(kind_);
      if (t.samples.size() != grid.size())
        throw ConfigError("Potential: tabulated length does not match grid");
      v = t.samples;
    }
    return v;
  }

 private:
  template <typename K>
  explicit Potential(K k) : kind_(std::move(k)) {}
  std::variant<PowerLaw, Parabolic, Tabulated> kind_;
};

// Strang splitting: half potential phase, full kinetic multiplier, half
// potential phase, per step. Each factor is unit modulus, so the L2 norm is
// conserved to rounding regardless of dt. dt < 0 runs backwards.
inline Field split_step(const Field& field, const Potential& potential, LevyIndex alpha,
                        ScaleConstant d_alpha, double dt, std::size_t steps) {
  if (steps < 1) throw ConfigError("split_step: steps must be >= 1");
  const Grid1D& g = field.grid();
  const std::vector<double> v = potential.sample(g);
  std::vector<cplx> half_phase(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double ph = -0.5 * v[j] * dt;
    half_phase[j] = cplx(std::cos(ph), std::sin(ph));
  }
  const std::vector<cplx> kin = kinetic_multiplier(g, alpha, d_alpha, dt);
  const FftPlan plan(g.size());
  const double inv_n = 1.0 / static_cast<double>(g.size());

  Field out = field;
  auto& s = out.samples();
  for (std::size_t step = 0; step < steps; ++step) {
    for (std::size_t j = 0; j < g.size(); ++j) s[j] *= half_phase[j];
    plan.forward(s);
    for (std::size_t k = 0; k < g.size(); ++k) s[k] *= kin[k] * inv_n;
    plan.backward(s);
    for (std::size_t j = 0; j < g.size(); ++j) s[j] *= half_phase[j];
  }
  return out;
}

// Fourier-plane field phi(x) = sqrt(i/(lambda f)) int psi(s) exp(+2 pi i x s
// / (lambda f)) ds, evaluated as a scaled unitary FFT on the conjugate grid.
// sqrt(i) takes the principal branch exp(i pi/4).
inline Field to_fourier_plane(const Field& field, double lambda, double f) {
  const LfTransform tf(field.grid(), lambda, f);
  const std::size_t n = field.size();
  // plus-kernel transform of the conjugated minus-kernel: evaluate directly
  // as conj(minus(conj(psi))) to reuse the exact DFT factorization.
  std::vector<cplx> tmp(n);
  for (std::size_t j = 0; j < n; ++j) tmp[j] = std::conj(field[j]);
  std::vector<cplx> out;
  tf.minus(tmp, out);
  const double lf = lambda * f;
  const cplx pref = std::sqrt(1.0 / lf) * cplx(std::cos(0.25 * std::numbers::pi),
                                               std::sin(0.25 * std::numbers::pi));
  for (cplx& z : out) z = pref * std::conj(z);
  return Field(tf.q_grid(), std::move(out));
}

// Exact inverse of to_fourier_plane; the target near-field grid must be the
// one whose conjugate grid carries `field`.
inline Field from_fourier_plane(const Field& field, double lambda, double f,
                                const Grid1D& gamma) {
  const LfTransform tf(gamma, lambda, f);
  if (field.grid() != tf.q_grid())
    throw ConfigError("from_fourier_plane: field is not on the conjugate grid of gamma");
  const std::size_t n = field.size();
  const double lf = lambda * f;
  const cplx inv_pref_conj = std::sqrt(lf) * cplx(std::cos(0.25 * std::numbers::pi),
                                                  std::sin(0.25 * std::numbers::pi));
  std::vector<cplx> tmp(n);
  for (std::size_t m = 0; m < n; ++m) tmp[m] = std::conj(field[m]) * inv_pref_conj;
  std::vector<cplx> out;
  tf.plus(tmp, out);
  for (cplx& z : out) z = std::conj(z);
  return Field(gamma, std::move(out));
}

}  // namespace fracavity

#endif  // FRACAVITY_PROPAGATOR_HPP
