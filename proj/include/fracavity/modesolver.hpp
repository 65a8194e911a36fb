#ifndef FRACAVITY_MODESOLVER_HPP
#define FRACAVITY_MODESOLVER_HPP

// Fox-Li extraction of the dominant cavity eigenmode, lasing-threshold
// bisection, identification against the analytic mode family, and direct
// diagonalization of the momentum-space eigenproblem
//   E phi = beta |x|^alpha phi - (lambda f^2/(2 pi R)) phi''.
//
// Parity commutes with the round trip (even masks, even gain), so the
// even and odd sectors evolve independently. The solver power-iterates
// each sector separately, re-projecting every iteration to keep round-off
// from reseeding the other sector, and compares the two dominant
// eigenvalues. Sector gaps below `sector_resolution` are reported as
// degenerate and resolved toward the even mode.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fracavity/cavity.hpp"
#include "fracavity/errors.hpp"
#include "fracavity/grid.hpp"
#include "fracavity/oracle.hpp"
#include "fracavity/propagator.hpp"
#include "fracavity/tridiag.hpp"

namespace fracavity {

inline constexpr std::uint64_t kDefaultSeed = 123456789u;
inline constexpr int kUnidentified = -1;

// Deterministic complex standard-normal seed field (Box-Muller over raw
// mt19937_64 output; avoids implementation-defined distributions).
inline Field random_seed_field(const Grid1D& grid, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  const auto uniform = [&eng]() {
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
  };
  Field f(grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    f[j] = cplx(r * std::cos(a), r * std::sin(a));
  }
  return f;
}

struct PowerIterationResult {
  Field field{Grid1D(-1.0, 1.0, 2)};
  cplx sigma{0.0, 0.0};         // dominant eigenvalue estimate at exit
  cplx sigma_second{0.0, 0.0};  // runner-up Ritz value (pair-resolved exits)
  int iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
  double subspace_residual = std::numeric_limits<double>::infinity();
  bool converged = false;    // strict: field residual met the tolerance
  bool ritz_stable = false;  // dominant-pair eigenvalues stabilized
};

// Plain power iteration of the round-trip operator with Rayleigh-quotient
// eigenvalue. `parity` (+1/-1) confines the iteration to one parity sector.
//
// Gain reshaping can pull the top two same-parity eigenvalues within ~1e-5
// of each other in modulus (an avoided crossing); there the single-vector
// iterate wanders between them indefinitely. With `ritz` enabled the run
// periodically diagonalizes the restriction of the operator to
// span{psi, A psi}: both eigenvalues of the dominant pair converge at the
// next spectral gap, which stays healthy. The exit field is then the
// dominant Ritz vector and `sigma_second` carries the runner-up.
inline PowerIterationResult power_iterate(const RoundTrip& op, Field seed,
                                          std::optional<int> parity, double tol,
                                          int max_iter, bool ritz = false) {
  if (parity) project_parity(seed, *parity);
  const double seed_norm = norm_l2(seed);
  if (!(seed_norm > 0.0)) throw ConfigError("power_iterate: zero seed");
  scale(seed, cplx(1.0 / seed_norm, 0.0));

  constexpr int kRitzStride = 25;      // extraction cost is one extra trip
  constexpr double kRitzCap = 2e-4;    // pair-subspace closure requirement
  constexpr int kRitzStreak = 3;       // consecutive stable extractions

  PowerIterationResult res;
  res.field = std::move(seed);
  Field next(res.field.grid());
  cplx sigma_old(0.0, 0.0);
  cplx ritz_prev(0.0, 0.0);
  int ritz_streak = 0;
  for (int it = 1; it <= max_iter; ++it) {
    op.apply(res.field.samples(), next.samples());
    if (parity) project_parity(next, *parity);
    const cplx sigma = inner_product(res.field, next);
    double rdiff = 0.0;
    for (std::size_t j = 0; j < next.size(); ++j)
      rdiff += std::norm(next[j] - sigma * res.field[j]);
    const double residual = std::sqrt(rdiff * res.field.grid().dx());
    const double nn = norm_l2(next);
    res.iterations = it;
    res.sigma = sigma;
    res.residual = residual;

    if (residual <= 10.0 * tol &&
        (std::abs(sigma - sigma_old) <= tol * std::abs(sigma) || residual <= tol)) {
      scale(next, cplx(1.0 / nn, 0.0));
      res.field = std::move(next);
      res.converged = true;
      return res;
    }

    if (ritz && (it % kRitzStride == 0 || it == max_iter)) {
      // orthonormal basis {psi, b2} of span{psi, A psi}
      Field b2 = next;
      for (std::size_t j = 0; j < b2.size(); ++j) b2[j] -= sigma * res.field[j];
      const double beta = norm_l2(b2);
      if (beta > 1e-14 * std::abs(sigma)) {
        scale(b2, cplx(1.0 / beta, 0.0));
        Field t(res.field.grid());
        op.apply(b2.samples(), t.samples());
        if (parity) project_parity(t, *parity);
        const cplx h12 = inner_product(res.field, t);
        const cplx h22 = inner_product(b2, t);
        // closure of the pair subspace under the operator
        double r2 = 0.0;
        for (std::size_t j = 0; j < t.size(); ++j)
          r2 += std::norm(t[j] - h12 * res.field[j] - h22 * b2[j]);
        r2 = std::sqrt(r2 * res.field.grid().dx());
        // eigenpair of [[sigma, h12], [beta, h22]]
        const cplx tr = sigma + h22;
        const cplx disc = std::sqrt(tr * tr - 4.0 * (sigma * h22 - h12 * beta));
        const cplx l1 = 0.5 * (tr + disc);
        const cplx l2 = 0.5 * (tr - disc);
        const cplx dom = (std::abs(l1) >= std::abs(l2)) ? l1 : l2;
        const cplx sub = (std::abs(l1) >= std::abs(l2)) ? l2 : l1;
        if (std::abs(dom - ritz_prev) <= tol * std::abs(dom))
          ++ritz_streak;
        else
          ritz_streak = 0;
        ritz_prev = dom;
        if (ritz_streak >= kRitzStreak && r2 <= kRitzCap) {
          // exit on the dominant Ritz vector with its honest residual
          cplx c1(h12), c2(dom - sigma);
          if (std::abs(c1) + std::abs(c2) < 1e-300) c1 = cplx(1.0, 0.0);
          Field v = res.field;
          for (std::size_t j = 0; j < v.size(); ++j) v[j] = c1 * v[j] + c2 * b2[j];
          const double vn = norm_l2(v);
          if (vn > 0.0) scale(v, cplx(1.0 / vn, 0.0));
          Field av(v.grid());
          op.apply(v.samples(), av.samples());
          if (parity) project_parity(av, *parity);
          double vres = 0.0;
          for (std::size_t j = 0; j < v.size(); ++j) vres += std::norm(av[j] - dom * v[j]);
          res.field = std::move(v);
          res.sigma = dom;
          res.sigma_second = sub;
          res.residual = std::sqrt(vres * res.field.grid().dx());
          res.subspace_residual = r2;
          res.ritz_stable = true;
          return res;
        }
      }
    }

    sigma_old = sigma;
    scale(next, cplx(1.0 / nn, 0.0));
    std::swap(res.field, next);
  }
  return res;
}

struct ModeResult {
  cplx sigma{0.0, 0.0};                 // dominant round-trip eigenvalue
  double g0_threshold = std::numeric_limits<double>::quiet_NaN();
  int mode_index = kUnidentified;       // analytic family index, alpha = 1 only
  Field field_gamma;                    // unit L2 at the near-field plane
  Field field_q;                        // Fourier-plane transport of field_gamma
  double overlap_with_oracle = 0.0;     // |<field_q, phi_n>|^2 against best match
  double intensity_overlap = 0.0;       // normalized correlation of |field_q|^2
  int iterations = 0;                   // selected-sector iteration count
  double residual = 0.0;
  bool degenerate = false;              // sector gap below resolution
  cplx sigma_other_sector{0.0, 0.0};    // eigenvalue of the losing parity sector
  bool has_other_sector = false;

  ModeResult() : field_gamma(Grid1D(-1.0, 1.0, 2)), field_q(Grid1D(-1.0, 1.0, 2)) {}
};

struct SolverOptions {
  std::optional<Field> seed;            // explicit seed overrides the random one
  std::uint64_t rng_seed = kDefaultSeed;
  double tol = 1e-8;
  int max_iter = 20000;
  double sector_resolution = 1e-3;      // relative |sigma| gap treated as a tie
  int oracle_mode_count = 24;           // identification basis size at alpha = 1
  double identify_floor = 0.80;         // below this the mode is unidentified
};

struct IdentifyResult {
  int index = kUnidentified;  // kUnidentified when overlap < floor
  double overlap = 0.0;
  int best_index = kUnidentified;  // argmax irrespective of the floor
};

// argmax_n |<field_q, phi_n>|^2 over a normalized oracle basis. Invariant
// under global phase and positive rescaling of field_q.
inline IdentifyResult identify_mode(const Field& field_q, const AiryModeBasis& basis,
                                    double floor = 0.80) {
  IdentifyResult out;
  const double nrm = norm_l2(field_q);
  if (!(nrm > 0.0) || basis.fields.empty()) return out;
  double best = -1.0;
  int best_n = kUnidentified;
  for (std::size_t i = 0; i < basis.fields.size(); ++i) {
    const cplx ip = inner_product(basis.fields[i], field_q);
    const double ov = std::norm(ip) / (nrm * nrm);
    if (ov > best) {
      best = ov;
      best_n = basis.modes[i].n;
    }
  }
  out.overlap = best;
  out.best_index = best_n;
  out.index = (best >= floor) ? best_n : kUnidentified;
  return out;
}

namespace solver_detail {

inline double intensity_correlation(const Field& a, const Field& b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double ia = std::norm(a[j]);
    const double ib = std::norm(b[j]);
    ab += ia * ib;
    aa += ia * ia;
    bb += ib * ib;
  }
  return (aa > 0.0 && bb > 0.0) ? ab / std::sqrt(aa * bb) : 0.0;
}

struct SectorPair {
  PowerIterationResult even;
  PowerIterationResult odd;
  bool ran_even = false;
  bool ran_odd = false;
};

// Run the parity-resolved iteration from per-sector seeds. A seed with a
// negligible component in one sector skips that sector (explicit pure-parity
// seeds stay in their sector).
inline SectorPair run_sectors(const RoundTrip& op, const Field& seed, double tol,
                              int max_iter) {
  SectorPair out;
  Field even = seed;
  project_parity(even, +1);
  Field odd = seed;
  project_parity(odd, -1);
  const double total = norm_l2(seed);
  if (norm_l2(even) > 1e-12 * total) {
    out.even = power_iterate(op, std::move(even), +1, tol, max_iter);
    out.ran_even = true;
  }
  if (norm_l2(odd) > 1e-12 * total) {
    out.odd = power_iterate(op, std::move(odd), -1, tol, max_iter);
    out.ran_odd = true;
  }
  if (!out.ran_even && !out.ran_odd) throw ConfigError("fox_li: zero seed");
  return out;
}

struct Selection {
  const PowerIterationResult* winner;
  const PowerIterationResult* loser;  // nullptr when only one sector ran
  bool degenerate;
};

inline Selection select_sector(const SectorPair& p, double resolution) {
  if (!p.ran_odd) return {&p.even, nullptr, false};
  if (!p.ran_even) return {&p.odd, nullptr, false};
  const double se = std::abs(p.even.sigma);
  const double so = std::abs(p.odd.sigma);
  const bool degen = std::abs(se - so) <= resolution * std::max(se, so);
  if (degen || se >= so) return {&p.even, &p.odd, degen};
  return {&p.odd, &p.even, false};
}

inline ModeResult assemble_result(const RoundTrip& op, const Selection& sel) {
  const CavityConfig& cfg = op.config();
  ModeResult res;
  res.sigma = sel.winner->sigma;
  res.iterations = sel.winner->iterations;
  res.residual = sel.winner->residual;
  res.degenerate = sel.degenerate;
  res.field_gamma = sel.winner->field;
  res.field_q = to_fourier_plane(res.field_gamma, cfg.lambda, cfg.f);
  if (sel.loser) {
    res.sigma_other_sector = sel.loser->sigma;
    res.has_other_sector = true;
  }
  return res;
}

inline void identify_result(ModeResult& res, const RoundTrip& op, const SolverOptions& opts) {
  const CavityConfig& cfg = op.config();
  if (cfg.alpha != 1.0 || !std::holds_alternative<SphericalMirror>(cfg.mirror)) return;
  const AiryModeBasis basis =
      airy_mode_basis(cfg, res.field_q.grid(), opts.oracle_mode_count);
  const IdentifyResult id = identify_mode(res.field_q, basis, opts.identify_floor);
  res.mode_index = id.index;
  res.overlap_with_oracle = id.overlap;
  if (id.best_index >= 0) {
    res.intensity_overlap =
        intensity_correlation(res.field_q, basis.fields[static_cast<std::size_t>(id.best_index)]);
  }
}

}  // namespace solver_detail

// Dominant eigenmode of the cavity round trip by the Fox-Li method.
// Deterministic given an explicit seed (or fixed rng_seed). Throws
// ConvergenceError when the selected sector fails to meet tol within
// max_iter.
inline ModeResult fox_li(const CavityConfig& config, const Grid1D& grid,
                         const SolverOptions& opts = {}) {
  config.validate();
  if (!(opts.tol > 0.0)) throw ConfigError("fox_li: tol must be > 0");
  const RoundTrip op(config, grid);
  const Field seed = opts.seed ? *opts.seed : random_seed_field(grid, opts.rng_seed);
  if (opts.seed && opts.seed->grid() != grid) throw ConfigError("fox_li: seed grid mismatch");

  const auto sectors = solver_detail::run_sectors(op, seed, opts.tol, opts.max_iter);
  const auto sel = solver_detail::select_sector(sectors, opts.sector_resolution);
  if (!sel.winner->converged) {
    throw ConvergenceError("fox_li: power iteration did not converge (residual " +
                               std::to_string(sel.winner->residual) + " after " +
                               std::to_string(sel.winner->iterations) + " iterations)",
                           sel.winner->residual, sel.winner->iterations);
  }
  ModeResult res = solver_detail::assemble_result(op, sel);
  solver_detail::identify_result(res, op, opts);
  return res;
}

// Bisection on the peak gain g0 until the dominant eigenvalue sits on the
// unit circle: | |sigma_max(g0)| - 1 | <= tol. The bracket must satisfy
// |sigma(g_lo)| < 1 < |sigma(g_hi)|. Returns the converged mode at the
// threshold gain; ModeResult.iterations counts round trips over the whole
// search.
inline ModeResult threshold_search(const CavityConfig& config, const Grid1D& grid,
                                   double g_lo, double g_hi, double tol = 1e-4,
                                   const SolverOptions& opts = {}) {
  config.validate();
  if (!config.pump) throw ConfigError("threshold_search: config has no pump");
  if (!(g_lo < g_hi)) throw BracketError("threshold_search: need g_lo < g_hi");

  RoundTrip op(config, grid);
  const double root_t = std::sqrt(config.transmittance);
  const double coarse_tol = std::max(opts.tol, 1e-5);
  // Sector comparison only needs |sigma| to well below sector_resolution;
  // the warm-started chain keeps refining the iterates across bisection
  // steps, and the winner is polished at the full tolerance at the end.
  const int compare_iter = std::min(opts.max_iter, 4000);
  const int step_budget = std::max(4 * opts.max_iter, 80000);
  int total_iterations = 0;

  // |sigma| at a given pump level, warm-started per parity sector. Both
  // sectors run capped for the comparison; the sector the degeneracy rule
  // selects then keeps iterating until its eigenvalue is trustworthy
  // (strictly converged or extrapolation-stable), because branching the
  // bisection on a biased Rayleigh estimate can pin a bracket endpoint on
  // the wrong side of the threshold. Selection is re-evaluated after each
  // continuation in case the refined eigenvalue changes the pick.
  std::optional<Field> warm_even, warm_odd;
  const Field cold = opts.seed ? *opts.seed : random_seed_field(grid, opts.rng_seed);
  const auto usable = [](const PowerIterationResult& r) {
    return r.converged || r.ritz_stable;
  };
  const auto eval = [&](double g0, double tol_here)
      -> solver_detail::SectorPair {
    PumpProfile p = *config.pump;
    p.g0 = g0;
    op.set_pump(p);
    solver_detail::SectorPair pair;
    Field se = warm_even ? *warm_even : cold;
    Field so = warm_odd ? *warm_odd : cold;
    project_parity(se, +1);
    project_parity(so, -1);
    pair.even = power_iterate(op, std::move(se), +1, tol_here, compare_iter, true);
    pair.ran_even = true;
    pair.odd = power_iterate(op, std::move(so), -1, tol_here, compare_iter, true);
    pair.ran_odd = true;
    int spent = pair.even.iterations + pair.odd.iterations;
    for (;;) {
      const auto sel = solver_detail::select_sector(pair, opts.sector_resolution);
      PowerIterationResult& winner = (sel.winner == &pair.even) ? pair.even : pair.odd;
      if (usable(winner) || spent >= step_budget) break;
      const int parity = (sel.winner == &pair.even) ? +1 : -1;
      PowerIterationResult more =
          power_iterate(op, winner.field, parity, tol_here,
                        std::min(opts.max_iter, step_budget - spent), true);
      spent += more.iterations;
      more.iterations += winner.iterations;
      winner = std::move(more);
    }
    total_iterations += spent;
    warm_even = pair.even.field;
    warm_odd = pair.odd.field;
    {
      const auto sel = solver_detail::select_sector(pair, opts.sector_resolution);
      if (!usable(*sel.winner))
        throw ConvergenceError("threshold_search: sector eigenvalue did not stabilize at g0 = " +
                                   std::to_string(g0) + " (residual " +
                                   std::to_string(sel.winner->residual) + ")",
                               sel.winner->residual, spent);
    }
    return pair;
  };

  // Passive spectral radius is exactly sqrt(T): the round trip is sqrt(T)
  // times a unitary operator when the pump is off.
  const auto sigma_mag_at = [&](double g0, double tol_here) -> double {
    if (g0 == 0.0) return root_t;
    const auto pair = eval(g0, tol_here);
    const auto sel = solver_detail::select_sector(pair, opts.sector_resolution);
    return std::abs(sel.winner->sigma);
  };

  const double lo_mag = sigma_mag_at(g_lo, coarse_tol);
  if (std::abs(lo_mag - 1.0) <= tol && g_lo == 0.0) {
    // lossless cavity: the passive operator is unitary, every mode sits on
    // the unit circle, and the threshold is the bracket floor itself
    ModeResult res;
    res.sigma = cplx(root_t, 0.0);
    res.g0_threshold = g_lo;
    res.degenerate = true;
    Field rep = cold;
    project_parity(rep, +1);
    res.field_gamma = normalized(std::move(rep));
    res.field_q = to_fourier_plane(res.field_gamma, config.lambda, config.f);
    return res;
  }
  if (!(lo_mag < 1.0))
    throw BracketError("threshold_search: |sigma(g_lo)| = " + std::to_string(lo_mag) +
                       " is not below 1");
  const double hi_mag = sigma_mag_at(g_hi, coarse_tol);
  if (!(hi_mag > 1.0))
    throw BracketError("threshold_search: |sigma(g_hi)| = " + std::to_string(hi_mag) +
                       " is not above 1");

  double lo = g_lo, hi = g_hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const auto pair = eval(mid, coarse_tol);
    auto sel = solver_detail::select_sector(pair, opts.sector_resolution);
    double mag = std::abs(sel.winner->sigma);
    if (std::abs(mag - 1.0) <= tol) {
      // strict polish of the winning sector; if the pair crossing is too
      // tight for the field residual to fall, the Ritz-stable result and
      // its honest residual are kept
      const int parity = (sel.winner == &pair.even) ? +1 : -1;
      PowerIterationResult polished = power_iterate(op, sel.winner->field, parity, opts.tol,
                                                    opts.max_iter, true);
      total_iterations += polished.iterations;
      solver_detail::SectorPair final_pair = pair;
      ((parity > 0) ? final_pair.even : final_pair.odd) = polished;
      sel = solver_detail::select_sector(final_pair, opts.sector_resolution);
      ModeResult res = solver_detail::assemble_result(op, sel);
      solver_detail::identify_result(res, op, opts);
      res.g0_threshold = mid;
      res.iterations = total_iterations;
      return res;
    }
    if (mag > 1.0)
      hi = mid;
    else
      lo = mid;
  }
  throw ConvergenceError("threshold_search: bisection failed to localize the threshold",
                         0.0, total_iterations);
}

// Lowest eigenpairs of the momentum-space eigenvalue problem, discretized
// with second-order central differences and a diagonal beta |x|^alpha term
// (Dirichlet ends). Valid for any alpha > 0, which provides the numerical
// route for fractional oscillators without closed-form modes.
struct SpectrumResult {
  std::vector<double> energies;     // ascending
  std::vector<Field> modes;         // L2-normalized on the grid
  std::vector<bool> edge_warning;   // per-mode: edge amplitude > 1e-6 of peak
};

inline SpectrumResult diagonalize_momentum(double alpha, double beta, double lambda,
                                           double f, double R, const Grid1D& grid,
                                           std::size_t k_modes) {
  if (k_modes < 1) throw ConfigError("diagonalize_momentum: k_modes must be >= 1");
  if (!(alpha > 0.0)) throw ConfigError("diagonalize_momentum: alpha must be > 0");
  const double c = momentum_kinetic_coefficient(lambda, f, R);
  const std::size_t n = grid.size();
  const double inv_h2 = 1.0 / (grid.dx() * grid.dx());
  std::vector<double> diag(n), off(n - 1, -c * inv_h2);
  for (std::size_t j = 0; j < n; ++j) {
    const double ax = std::abs(grid.x(j));
    diag[j] = (beta == 0.0 ? 0.0 : beta * std::pow(ax, alpha)) + 2.0 * c * inv_h2;
  }
  const TridiagEigenResult eig = tridiag_lowest_eigenpairs(diag, off, k_modes);

  SpectrumResult out;
  out.energies = eig.values;
  out.modes.reserve(k_modes);
  out.edge_warning.resize(k_modes);
  const double inv_sqrt_dx = 1.0 / std::sqrt(grid.dx());
  for (std::size_t k = 0; k < k_modes; ++k) {
    Field mode(grid);
    double peak = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      mode[j] = cplx(eig.vectors[k][j] * inv_sqrt_dx, 0.0);
      peak = std::max(peak, std::abs(eig.vectors[k][j]));
    }
    const double edge = std::max(std::abs(eig.vectors[k][0]), std::abs(eig.vectors[k][n - 1]));
    out.edge_warning[k] = edge > 1e-6 * peak;
    out.modes.push_back(std::move(mode));
  }
  return out;
}

}  // namespace fracavity

#endif  // FRACAVITY_MODESOLVER_HPP
