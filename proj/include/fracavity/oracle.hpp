#ifndef FRACAVITY_ORACLE_HPP
#define FRACAVITY_ORACLE_HPP

// Closed-form references: the alpha = 1 dual-Airy eigenmodes
// phi_n(x) = sign(x)^n Ai(kappa |x| + r_n) with E_n = -(lambda f^2/2 pi R)
// kappa^2 r_n, the Gauss-Hermite y-modes of the astigmatic cavity, and
// separable 2D intensity assembly.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "fracavity/airy.hpp"
#include "fracavity/cavity.hpp"
#include "fracavity/errors.hpp"
#include "fracavity/grid.hpp"

namespace fracavity {

struct AiryMode {
  int n = 0;            // mode index
  double r_n = 0.0;     // zero of Ai' (n even) or Ai (n odd), negative
  double kappa = 0.0;   // (2 pi beta R / lambda f^2)^(1/3), 1/um
  double energy = 0.0;  // phase per round trip, > 0
  bool even = true;
};

// r_n: even n draws from the zeros of Ai', odd n from the zeros of Ai.
inline double airy_mode_rn(int n) {
  if (n < 0) throw ConfigError("airy_mode_rn: n must be >= 0");
  if (n % 2 == 0) return airy_zero(static_cast<std::size_t>(n / 2 + 1), AiryZeroKind::ai_prime);
  return airy_zero(static_cast<std::size_t>((n + 1) / 2), AiryZeroKind::ai);
}

namespace oracle_detail {

inline double spherical_radius(const CavityConfig& c) {
  const auto* s = std::get_if<SphericalMirror>(&c.mirror);
  if (!s) throw ConfigError("analytic Airy modes require a spherical mirror");
  return s->radius;
}

}  // namespace oracle_detail

// kappa and the kinetic coefficient lambda f^2/(2 pi R) of the momentum-space
// eigenproblem.
inline double airy_kappa(double beta, double lambda, double f, double R) {
  return std::cbrt(2.0 * std::numbers::pi * beta * R / (lambda * f * f));
}
inline double momentum_kinetic_coefficient(double lambda, double f, double R) {
  return lambda * f * f / (2.0 * std::numbers::pi * R);
}

// Analytic mode n of the alpha = 1 fractional oscillator, sampled on the
// Fourier-plane grid and L2-normalized. Only the alpha = 1 case has a
// closed form; other Levy indices go through diagonalize_momentum.
inline std::pair<AiryMode, Field> airy_mode(int n, const CavityConfig& cavity,
                                            const Grid1D& grid) {
  if (cavity.alpha != 1.0)
    throw ConfigError(
        "airy_mode: closed form exists only at alpha = 1; use diagonalize_momentum");
  const double R = oracle_detail::spherical_radius(cavity);
  AiryMode meta;
  meta.n = n;
  meta.even = (n % 2 == 0);
  meta.r_n = airy_mode_rn(n);
  meta.kappa = airy_kappa(cavity.beta, cavity.lambda, cavity.f, R);
  meta.energy = -momentum_kinetic_coefficient(cavity.lambda, cavity.f, R) * meta.kappa *
                meta.kappa * meta.r_n;

  Field field(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    double v;
    if (x == 0.0) {
      v = meta.even ? airy_ai(meta.r_n) : 0.0;  // continuous limit of sign(x)^n
    } else {
      v = airy_ai(meta.kappa * std::abs(x) + meta.r_n);
      if (!meta.even && x < 0.0) v = -v;
    }
    field[j] = cplx(v, 0.0);
  }
  return {meta, normalized(std::move(field))};
}

struct AiryModeBasis {
  std::vector<AiryMode> modes;
  std::vector<Field> fields;  // L2-normalized on the grid
};

inline AiryModeBasis airy_mode_basis(const CavityConfig& cavity, const Grid1D& grid,
                                     int count) {
  AiryModeBasis basis;
  basis.modes.reserve(count);
  basis.fields.reserve(count);
  for (int n = 0; n < count; ++n) {
    auto [meta, field] = airy_mode(n, cavity, grid);
    basis.modes.push_back(meta);
    basis.fields.push_back(std::move(field));
  }
  return basis;
}

// Gaussian-beam parameters of the y-direction cavity at the Fourier plane.
struct YCavityBeam {
  double w_y;  // spot size, um
  double R_y;  // wavefront curvature magnitude, um
};

inline YCavityBeam y_cavity_beam(double lambda, double f, double R) {
  if (!(R > 4.0 * f))
    throw StabilityError("y cavity unstable: requires R > 4f for a real spot size");
  const double w = std::sqrt(lambda * f / std::numbers::pi) * std::pow(R / (4.0 * f) - 1.0, 0.25) *
                   std::sqrt((4.0 * R - 12.0 * f) / (R - 4.0 * f));
  return {w, 2.0 * R - 6.0 * f};
}

// Gauss-Hermite y-mode Y_m(y) = H_m(sqrt(2) y/w_y) exp(-y^2/w_y^2
// - i pi y^2/(lambda R_y)), L2-normalized on the grid.
inline Field hermite_gauss(int m, double lambda, double f, double R, const Grid1D& grid) {
  if (m < 0) throw ConfigError("hermite_gauss: m must be >= 0");
  const YCavityBeam beam = y_cavity_beam(lambda, f, R);
  Field field(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double y = grid.x(j);
    const double u = std::numbers::sqrt2 * y / beam.w_y;
    // Hermite recurrence H_0 = 1, H_1 = 2u, H_k = 2u H_{k-1} - 2(k-1) H_{k-2}
    double h0 = 1.0, h1 = 2.0 * u;
    double h = (m == 0) ? h0 : h1;
    for (int k = 2; k <= m; ++k) {
      const double hk = 2.0 * u * h1 - 2.0 * (k - 1) * h0;
      h0 = h1;
      h1 = hk;
      h = hk;
    }
    const double amp = h * std::exp(-y * y / (beam.w_y * beam.w_y));
    const double ph = -std::numbers::pi * y * y / (lambda * beam.R_y);
    field[j] = amp * cplx(std::cos(ph), std::sin(ph));
  }
  return normalized(std::move(field));
}

// Separable 2D intensity |X(x)|^2 |Y(y)|^2, row-major in y.
struct Intensity2D {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> values;  // values[iy * x.size() + ix]

  double at(std::size_t ix, std::size_t iy) const { return values[iy * x.size() + ix]; }
};

inline Intensity2D assemble_2d(const Field& mode_x, const Field& mode_y) {
  Intensity2D map;
  map.x = mode_x.grid().x_values();
  map.y = mode_y.grid().x_values();
  const std::size_t nx = map.x.size(), ny = map.y.size();
  std::vector<double> ix(nx), iy(ny);
  for (std::size_t i = 0; i < nx; ++i) ix[i] = std::norm(mode_x[i]);
  for (std::size_t i = 0; i < ny; ++i) iy[i] = std::norm(mode_y[i]);
  map.values.resize(nx * ny);
  for (std::size_t r = 0; r < ny; ++r)
    for (std::size_t c = 0; c < nx; ++c) map.values[r * nx + c] = iy[r] * ix[c];
  return map;
}

}  // namespace fracavity

#endif  // FRACAVITY_ORACLE_HPP
