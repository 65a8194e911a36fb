#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "fracavity/modesolver.hpp"
#include "oracles/reference_ops.hpp"

using namespace fracavity;

namespace {

CavityConfig fig2_config() {
  CavityConfig c;
  c.lambda = 1.064;
  c.f = 1.0e4;
  c.alpha = 1.0;
  c.beta = 5.0e-3;
  c.mirror = SphericalMirror{5.0e5};
  c.transmittance = 0.97;
  return c;
}

constexpr double kPumpWidth = 28.284271247461902;  // sqrt(2) * 20 um

}  // namespace

TEST_CASE("identity cavity: any seed converges in one iteration with sigma = 1") {
  CavityConfig c;
  c.beta = 0.0;
  c.mirror = FlatWithMask{Potential::none()};
  c.transmittance = 1.0;
  const Grid1D g(-100.0, 100.0, 128);
  const ModeResult res = fox_li(c, g);
  CHECK(res.iterations == 1);
  CHECK(std::abs(res.sigma - cplx(1.0, 0.0)) < 1e-12);
  CHECK(res.residual < 1e-12);
}

TEST_CASE("power iteration matches dense diagonalization on a 64-point cavity") {
  CavityConfig c = fig2_config();
  c.pump = PumpProfile{0.08, 50.0, kPumpWidth};
  const Grid1D g(-300.0, 300.0, 64);

  // assemble the round-trip matrix column by column
  const RoundTrip op(c, g);
  Eigen::MatrixXcd a(64, 64);
  std::vector<cplx> e(64), col(64);
  for (int j = 0; j < 64; ++j) {
    std::fill(e.begin(), e.end(), cplx(0.0, 0.0));
    e[j] = cplx(1.0, 0.0);
    op.apply(e, col);
    for (int i = 0; i < 64; ++i) a(i, j) = col[i];
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, false);
  double dom = 0.0;
  cplx dom_val;
  for (int i = 0; i < 64; ++i) {
    if (std::abs(solver.eigenvalues()(i)) > dom) {
      dom = std::abs(solver.eigenvalues()(i));
      dom_val = solver.eigenvalues()(i);
    }
  }

  SolverOptions opts;
  opts.tol = 1e-10;
  opts.max_iter = 200000;
  const ModeResult res = fox_li(c, g, opts);
  CHECK(std::abs(res.sigma - dom_val) / std::abs(dom_val) < 1e-8);
}

TEST_CASE("|sigma_max| grows monotonically with pump gain") {
  // 8 samples across the threshold bracket; the Rayleigh estimates are far
  // more accurate than the ~1e-2 increments between samples
  CavityConfig c = fig2_config();
  const Grid1D g(-600.0, 600.0, 512);
  double prev = std::sqrt(c.transmittance);  // g0 = 0: passive spectral radius
  for (int i = 1; i <= 8; ++i) {
    c.pump = PumpProfile{0.0375 * i, 170.0, kPumpWidth};
    const RoundTrip op(c, g);
    const Field seed = random_seed_field(g, kDefaultSeed);
    const auto even = power_iterate(op, seed, +1, 1e-6, 30000);
    const auto odd = power_iterate(op, seed, -1, 1e-6, 30000);
    const double mag = std::max(std::abs(even.sigma), std::abs(odd.sigma));
    CHECK(mag > prev);
    prev = mag;
  }
}

TEST_CASE("on-axis pumping selects the even fundamental at threshold") {
  CavityConfig c = fig2_config();
  c.pump = PumpProfile{0.0, 0.0, kPumpWidth};
  const Grid1D g(-600.0, 600.0, 1024);
  const ModeResult res = threshold_search(c, g, 0.0, 0.3, 1e-4);
  CHECK(std::abs(std::abs(res.sigma) - 1.0) <= 1e-4);
  CHECK(res.mode_index == 0);
  // converged mode is even: reflection leaves it unchanged
  const Field rev = parity_reversed(res.field_gamma);
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) err += std::norm(rev[j] - res.field_gamma[j]);
  CHECK(std::sqrt(err * g.dx()) < 1e-6);
}

TEST_CASE("threshold bracket validation") {
  CavityConfig c = fig2_config();
  c.pump = PumpProfile{0.0, 0.0, kPumpWidth};
  const Grid1D g(-600.0, 600.0, 512);
  // |sigma(0.25)| > 1 already, so (0.25, 0.3) has no sign change
  CHECK_THROWS_AS(threshold_search(c, g, 0.25, 0.30, 1e-4), BracketError);
  CHECK_THROWS_AS(threshold_search(c, g, 0.30, 0.25, 1e-4), BracketError);
  CavityConfig nopump = fig2_config();
  CHECK_THROWS_AS(threshold_search(nopump, g, 0.0, 0.3, 1e-4), ConfigError);
}

TEST_CASE("lossless passive cavity has zero threshold") {
  CavityConfig c = fig2_config();
  c.transmittance = 1.0;
  c.pump = PumpProfile{0.0, 0.0, kPumpWidth};
  const Grid1D g(-600.0, 600.0, 512);
  const ModeResult res = threshold_search(c, g, 0.0, 0.1, 1e-4);
  CHECK(res.g0_threshold == 0.0);
}

TEST_CASE("identify_mode: exact self-overlap, noise robustness, invariances") {
  const CavityConfig c = fig2_config();
  const Grid1D g(-600.0, 600.0, 4096);
  const Grid1D q = fourier_plane_grid(g, c.lambda, c.f);
  const AiryModeBasis basis = airy_mode_basis(c, q, 24);

  const IdentifyResult self = identify_mode(basis.fields[6], basis);
  CHECK(self.index == 6);
  CHECK(self.overlap == doctest::Approx(1.0).epsilon(1e-9));

  // 1% additive noise barely moves the overlap
  Field noisy = basis.fields[0];
  const Field noise = normalized(random_seed_field(q, 99));
  for (std::size_t j = 0; j < q.size(); ++j) noisy[j] += 0.01 * noise[j];
  const IdentifyResult pert = identify_mode(noisy, basis);
  CHECK(pert.index == 0);
  CHECK(pert.overlap >= 0.98);

  // invariance under global phase and positive scaling
  Field rotated = basis.fields[3];
  scale(rotated, 2.5 * std::exp(cplx(0.0, 1.1)));
  const IdentifyResult rot = identify_mode(rotated, basis);
  CHECK(rot.index == 3);
  CHECK(rot.overlap == doctest::Approx(1.0).epsilon(1e-9));

  // garbage field: best overlap below the floor -> unidentified
  Field junk(q);
  for (std::size_t j = 0; j < q.size(); ++j)
    junk[j] = cplx(std::abs(q.x(j)) < 5000.0 ? 1.0 : 0.0, 0.0);
  const IdentifyResult uid = identify_mode(junk, basis);
  CHECK(uid.index == kUnidentified);
  CHECK(uid.overlap < 0.80);
}

TEST_CASE("diagonalize_momentum: alpha = 2 reproduces the harmonic spectrum") {
  // E phi = beta x^2 phi - c phi'' has spacing 2 sqrt(beta c)
  const double beta = 5.0e-3, lambda = 1.064, f = 1.0e4, R = 5.0e5;
  const double c = lambda * f * f / (2.0 * std::numbers::pi * R);
  const Grid1D g(-150.0, 150.0, 4096);
  const SpectrumResult spectrum = diagonalize_momentum(2.0, beta, lambda, f, R, g, 21);
  const double spacing = 2.0 * std::sqrt(beta * c);
  for (int n = 0; n <= 20; ++n) {
    const double expect = spacing * (n + 0.5);
    CHECK(std::abs(spectrum.energies[n] - expect) / expect < 1e-4);
    CHECK_FALSE(spectrum.edge_warning[n]);
  }
}

TEST_CASE("diagonalize_momentum: alpha = 1 matches the Airy energies") {
  const CavityConfig c = fig2_config();
  const Grid1D g(-600.0, 600.0, 4096);
  const SpectrumResult spectrum = diagonalize_momentum(1.0, c.beta, c.lambda, c.f, 5.0e5, g, 21);
  const double ck = momentum_kinetic_coefficient(c.lambda, c.f, 5.0e5);
  const double kap = airy_kappa(c.beta, c.lambda, c.f, 5.0e5);
  for (int n = 0; n <= 20; ++n) {
    const double expect = -ck * kap * kap * airy_mode_rn(n);
    CHECK(std::abs(spectrum.energies[n] - expect) / expect < 1e-4);
  }
  CHECK(std::is_sorted(spectrum.energies.begin(), spectrum.energies.end()));
}

TEST_CASE("diagonalize_momentum eigenfunctions overlap the analytic modes") {
  const CavityConfig c = fig2_config();
  const Grid1D g(-600.0, 600.0, 2048);
  const SpectrumResult spectrum = diagonalize_momentum(1.0, c.beta, c.lambda, c.f, 5.0e5, g, 21);
  for (int n = 0; n <= 20; ++n) {
    const auto [meta, mode] = airy_mode(n, c, g);
    const double ov = std::norm(inner_product(mode, spectrum.modes[n]));
    CHECK(ov >= 0.9999);
  }
}

TEST_CASE("diagonalize_momentum: beta = 0 gives the discrete particle-in-a-box") {
  // Dirichlet second difference: E_j = (2c/h^2)(1 - cos(j pi/(n+1)))
  const double lambda = 1.064, f = 1.0e4, R = 5.0e5;
  const double c = lambda * f * f / (2.0 * std::numbers::pi * R);
  const Grid1D g(-100.0, 100.0, 256);
  const SpectrumResult spectrum = diagonalize_momentum(1.0, 0.0, lambda, f, R, g, 5);
  const double h = g.dx();
  const auto n = static_cast<double>(g.size());
  for (int j = 1; j <= 5; ++j) {
    const double expect = 2.0 * c / (h * h) * (1.0 - std::cos(j * std::numbers::pi / (n + 1.0)));
    CHECK(spectrum.energies[j - 1] == doctest::Approx(expect).epsilon(1e-10));
  }
  // box modes touch the grid ends; the edge warning must fire
  CHECK(spectrum.edge_warning[0]);
}

TEST_CASE("fox_li reports non-convergence with the last residual") {
  // passive cavity with masks and T = 1 is unitary: every eigenvalue has
  // unit modulus, so power iteration cannot isolate a dominant mode
  CavityConfig c = fig2_config();
  c.transmittance = 1.0;
  const Grid1D g(-300.0, 300.0, 128);
  SolverOptions opts;
  opts.max_iter = 300;
  try {
    fox_li(c, g, opts);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.iterations == 300);
    CHECK(e.residual > 0.0);
    CHECK(std::isfinite(e.residual));
  }
}

TEST_CASE("explicit seed makes fox_li deterministic and parity-faithful") {
  CavityConfig c = fig2_config();
  c.pump = PumpProfile{0.05, 170.0, kPumpWidth};
  const Grid1D g(-600.0, 600.0, 512);
  Field seed = random_seed_field(g, 7);
  project_parity(seed, -1);  // pure odd seed stays in the odd sector
  SolverOptions opts;
  opts.seed = seed;
  const ModeResult a = fox_li(c, g, opts);
  const ModeResult b = fox_li(c, g, opts);
  CHECK(a.sigma == b.sigma);
  const Field rev = parity_reversed(a.field_gamma);
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) err += std::norm(rev[j] + a.field_gamma[j]);
  CHECK(std::sqrt(err * g.dx()) < 1e-8);
  CHECK_FALSE(a.has_other_sector);
}
