#ifndef FRACAVITY_CAVITY_HPP
#define FRACAVITY_CAVITY_HPP

// One exact round trip of the 4f resonator, factorized through the scaled
// Fourier transform: mask exp(-i beta |xi|^alpha) at the Fourier plane,
// mirror phase exp(-i V(x)), gain sheet exp(g(x)) and output coupling
// sqrt(T) at the near-field plane.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

#include "fracavity/errors.hpp"
#include "fracavity/grid.hpp"
#include "fracavity/lf_transform.hpp"
#include "fracavity/propagator.hpp"

namespace fracavity {

// Two off-axis longitudinal pump spots of peak round-trip gain g0 at +-rho:
// g(x) = g0 exp[-2(x-rho)^2/w_p^2] + g0 exp[-2(x+rho)^2/w_p^2]
struct PumpProfile {
  double g0 = 0.0;   // peak round-trip gain, dimensionless
  double rho = 0.0;  // half separation of the two spots, um
  double w_p = 1.0;  // pump spot size, um

  bool operator==(const PumpProfile&) const = default;

  void validate() const {
    if (!(g0 >= 0.0)) throw ConfigError("PumpProfile: g0 must be >= 0");
    if (!(w_p > 0.0)) throw ConfigError("PumpProfile: w_p must be > 0");
    if (!(rho >= 0.0)) throw ConfigError("PumpProfile: rho must be >= 0");
  }
};

inline std::vector<double> gain_profile(const PumpProfile& pump, const Grid1D& grid) {
  pump.validate();
  std::vector<double> g(grid.size());
  const double inv = 2.0 / (pump.w_p * pump.w_p);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double xm = grid.x(j) - pump.rho;
    const double xp = grid.x(j) + pump.rho;
    g[j] = pump.g0 * (std::exp(-inv * xm * xm) + std::exp(-inv * xp * xp));
  }
  return g;
}

// End mirror at the near-field plane: either a flat mirror carrying a thin
// phase mask, or a spherical mirror of radius R (phase 2 pi x^2/(lambda R)).
struct FlatWithMask {
  Potential mask = Potential::none();
};
struct SphericalMirror {
  double radius;  // um
};

struct CavityConfig {
  double lambda = 1.064;  // wavelength, um
  double f = 1.0e4;       // lens focal length, um
  double alpha = 1.0;     // Levy index of the Fourier-plane mask
  double beta = 0.0;      // mask strength, (um)^-alpha
  std::variant<FlatWithMask, SphericalMirror> mirror = FlatWithMask{};
  double transmittance = 1.0;  // output coupler power transmittance T in (0, 1]
  std::optional<PumpProfile> pump;

  void validate() const {
    if (!(lambda > 0.0) || !(f > 0.0)) throw ConfigError("CavityConfig: lambda, f must be > 0");
    if (!(beta >= 0.0)) throw ConfigError("CavityConfig: beta must be >= 0");
    if (!(alpha > 0.0) || !(alpha <= 2.0))
      throw ConfigError("CavityConfig: alpha must be in (0, 2]");
    if (!(transmittance > 0.0) || !(transmittance <= 1.0))
      throw ConfigError("CavityConfig: T must be in (0, 1]");
    if (pump) pump->validate();
  }

  // D_alpha = beta (lambda f / 2 pi)^alpha
  double d_alpha() const {
    return beta * std::pow(lambda * f / (2.0 * std::numbers::pi), alpha);
  }

  // Mirror potential V(x) at the near-field plane.
  Potential mirror_potential() const {
    if (const auto* s = std::get_if<SphericalMirror>(&mirror)) {
      return Potential::parabolic(lambda, s->radius);
    }
    return std::get<FlatWithMask>(mirror).mask;
  }
};

// Precomputed round-trip applier for one cavity configuration on one grid.
// The Fourier-plane ramps of the scaled transform cancel between the
// forward and inverse legs, so one trip reduces to
//   out = post .* IFFT( mask/n .* FFT( pre .* in ) )
// with pre the near-field ramp, post its conjugate times the mirror phase,
// gain sheet and output coupling. apply() is reentrant for distinct output
// buffers; one instance per thread is the intended use.
class RoundTrip {
 public:
  RoundTrip(const CavityConfig& config, const Grid1D& gamma)
      : config_(config), tf_(gamma, config.lambda, config.f) {
    config.validate();
    const Grid1D& q = tf_.q_grid();
    const double inv_n = 1.0 / static_cast<double>(q.size());
    mid_.resize(q.size());
    for (std::size_t m = 0; m < q.size(); ++m) {
      const double ph =
          (config.beta == 0.0) ? 0.0
                               : -config.beta * std::pow(std::abs(q.x(m)), config.alpha);
      mid_[m] = inv_n * cplx(std::cos(ph), std::sin(ph));
    }
    pre_ = tf_.gamma_ramp();
    rebuild_post();
  }

  const Grid1D& gamma_grid() const { return tf_.gamma_grid(); }
  const Grid1D& q_grid() const { return tf_.q_grid(); }
  const CavityConfig& config() const { return config_; }

  // Replace the pump gain, keeping masks and transforms (threshold searches
  // re-scale only g0).
  void set_pump(const PumpProfile& pump) {
    config_.pump = pump;
    rebuild_post();
  }

  void apply(const std::vector<cplx>& in, std::vector<cplx>& out) const {
    const std::size_t n = pre_.size();
    buf_.resize(n);
    for (std::size_t j = 0; j < n; ++j) buf_[j] = in[j] * pre_[j];
    tf_.plan().forward(buf_.data());
    for (std::size_t m = 0; m < n; ++m) buf_[m] *= mid_[m];
    tf_.plan().backward(buf_.data());
    out.resize(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = buf_[j] * post_[j];
  }

  Field apply(const Field& field) const {
    if (field.grid() != tf_.gamma_grid()) throw ConfigError("RoundTrip: field grid mismatch");
    Field out(field.grid());
    apply(field.samples(), out.samples());
    return out;
  }

 private:
  void rebuild_post() {
    const Grid1D& gamma = tf_.gamma_grid();
    const std::vector<double> v = config_.mirror_potential().sample(gamma);
    const double root_t = std::sqrt(config_.transmittance);
    std::vector<double> g;
    if (config_.pump) g = gain_profile(*config_.pump, gamma);
    post_.resize(gamma.size());
    for (std::size_t j = 0; j < gamma.size(); ++j) {
      const double amp = root_t * (config_.pump ? std::exp(g[j]) : 1.0);
      post_[j] = amp * cplx(std::cos(-v[j]), std::sin(-v[j])) * std::conj(pre_[j]);
    }
  }

  CavityConfig config_;
  LfTransform tf_;
  std::vector<cplx> pre_;   // near-field ramp of the scaled transform
  std::vector<cplx> mid_;   // Fourier-plane mask including the 1/n DFT scale
  std::vector<cplx> post_;  // conj ramp x mirror phase x gain x sqrt(T)
  mutable std::vector<cplx> buf_;
};

inline Field round_trip(const Field& field, const CavityConfig& config) {
  return RoundTrip(config, field.grid()).apply(field);
}

}  // namespace fracavity

#endif  // FRACAVITY_CAVITY_HPP
