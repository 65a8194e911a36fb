#ifndef FRACAVITY_RUNNER_HPP
#define FRACAVITY_RUNNER_HPP

// Experiment drivers shared by the CLI: single-mode solve, parallel
// rho-sweep, split-step propagation, and 2D mode rendering. Each driver
// owns its output directory and finishes by writing a manifest that
// references every file it produced.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fracavity/config.hpp"
#include "fracavity/io.hpp"
#include "fracavity/modesolver.hpp"
#include "fracavity/propagator.hpp"

namespace fracavity {

namespace runner_detail {

inline std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::uint64_t job_seed(std::uint64_t base, std::uint64_t job) {
  // splitmix64 of (base, job): independent deterministic stream per job
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (job + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline ManifestResult to_manifest_result(const ModeResult& r, double rho) {
  ManifestResult out;
  out.rho_um = rho;
  out.mode_index = r.mode_index;
  out.g0_threshold = r.g0_threshold;
  out.sigma_re = r.sigma.real();
  out.sigma_im = r.sigma.imag();
  out.overlap = r.overlap_with_oracle;
  out.intensity_overlap = r.intensity_overlap;
  out.degenerate = r.degenerate;
  out.iterations = r.iterations;
  return out;
}

inline SolverOptions solver_options(const SimConfig& c, std::uint64_t seed) {
  SolverOptions opts;
  opts.rng_seed = seed;
  opts.tol = c.solver.tol;
  opts.max_iter = c.solver.max_iter;
  opts.sector_resolution = c.solver.sector_resolution;
  opts.oracle_mode_count = c.solver.oracle_modes;
  return opts;
}

}  // namespace runner_detail

// threshold_search + identification at one pump offset.
inline ModeResult solve_modes_at(const SimConfig& config, double rho, std::uint64_t seed) {
  SimConfig c = config;
  c.pump.rho = rho;
  const CavityConfig cavity = c.cavity();
  const Grid1D grid = c.grid.make();
  return threshold_search(cavity, grid, c.solver.bracket_lo, c.solver.bracket_hi,
                          c.solver.threshold_tol, runner_detail::solver_options(c, seed));
}

struct ModesRunSummary {
  ModeResult mode;
  std::filesystem::path manifest_path;
};

// cmd_modes driver: writes near-field, Fourier-plane and matched-oracle
// profiles plus the manifest.
inline ModesRunSummary run_modes(const SimConfig& config, std::optional<double> rho_override,
                                 std::uint64_t seed, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const double rho = rho_override.value_or(config.pump.rho);
  ModeResult mode = solve_modes_at(config, rho, seed);

  SimConfig snapshot = config;
  snapshot.pump.rho = rho;
  const std::string hash = config_hash(snapshot);

  RunManifest manifest;
  manifest.command = "modes";
  manifest.seed = seed;
  manifest.created_utc = runner_detail::utc_timestamp();
  manifest.config = snapshot;

  write_field_csv(out_dir / "nearfield.csv", "modes near-field plane", hash, mode.field_gamma);
  manifest.outputs.push_back({"nearfield_csv", "nearfield.csv"});
  write_field_csv(out_dir / "fourier.csv", "modes Fourier plane", hash, mode.field_q);
  manifest.outputs.push_back({"fourier_csv", "fourier.csv"});

  if (mode.mode_index >= 0) {
    const auto [meta, oracle_field] =
        airy_mode(mode.mode_index, snapshot.cavity(), mode.field_q.grid());
    write_field_csv(out_dir / "oracle.csv", "matched analytic mode", hash, oracle_field);
    manifest.outputs.push_back({"oracle_csv", "oracle.csv"});
  }

  manifest.results.push_back(runner_detail::to_manifest_result(mode, rho));
  write_manifest(out_dir / "manifest.txt", manifest);
  return {std::move(mode), out_dir / "manifest.txt"};
}

struct SweepRow {
  double rho = 0.0;
  ManifestResult result;
  std::string status = "ok";
};

struct SweepSummary {
  std::vector<SweepRow> rows;
  std::size_t failures = 0;
  std::filesystem::path table_path;
};

// cmd_sweep driver: one threshold search per rho, fanned out to a bounded
// worker pool. Results land in slots indexed by job id and are written by a
// single pass afterwards, so the table bytes do not depend on the number of
// workers.
inline SweepSummary run_sweep(const SimConfig& config, std::vector<double> rhos,
                              unsigned jobs, std::uint64_t seed,
                              const std::filesystem::path& out_dir) {
  if (rhos.empty()) throw ConfigError("sweep: empty rho list");
  std::filesystem::create_directories(out_dir);
  std::sort(rhos.begin(), rhos.end());

  std::vector<SweepRow> rows(rhos.size());
  std::atomic<std::size_t> next{0};
  const unsigned worker_count =
      std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(rhos.size())));

  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= rhos.size()) return;
      SweepRow& row = rows[i];
      row.rho = rhos[i];
      try {
        const ModeResult mode =
            solve_modes_at(config, rhos[i], runner_detail::job_seed(seed, i));
        row.result = runner_detail::to_manifest_result(mode, rhos[i]);
      } catch (const BracketError& e) {
        row.status = "bracket_error";
      } catch (const ConvergenceError& e) {
        row.status = "no_convergence";
      } catch (const std::exception& e) {
        row.status = "error";
      }
      row.result.rho_um = rhos[i];
      row.result.status = row.status;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < worker_count; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  const std::string hash = config_hash(config);
  std::ostringstream table;
  table << "# fracavity sweep\n";
  table << "# config_hash = " << hash << "\n";
  table << "# columns: rho_um,mode_index,g0_threshold,overlap,status\n";
  table << "rho_um,mode_index,g0_threshold,overlap,status\n";
  SweepSummary summary;
  for (const SweepRow& row : rows) {
    table << io_detail::fmt(row.rho) << "," << row.result.mode_index << ","
          << io_detail::fmt(row.result.g0_threshold) << ","
          << io_detail::fmt(row.result.overlap) << "," << row.status << "\n";
    if (row.status != "ok") ++summary.failures;
  }
  io_detail::write_text(out_dir / "sweep.csv", table.str());

  RunManifest manifest;
  manifest.command = "sweep";
  manifest.seed = seed;
  manifest.created_utc = runner_detail::utc_timestamp();
  manifest.config = config;
  manifest.outputs.push_back({"sweep_csv", "sweep.csv"});
  for (const SweepRow& row : rows) manifest.results.push_back(row.result);
  write_manifest(out_dir / "manifest.txt", manifest);

  summary.rows = std::move(rows);
  summary.table_path = out_dir / "sweep.csv";
  return summary;
}

// Initial field for the propagation driver.
inline Field make_initial_field(const SimConfig& config, const Grid1D& grid) {
  const InitialConfig& init = config.initial;
  if (init.kind == "gaussian") {
    Field f(grid);
    const double w0 = init.w0;
    const double pref = std::pow(2.0 / (std::numbers::pi * w0 * w0), 0.25);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double u = grid.x(j) - init.x0;
      f[j] = cplx(pref * std::exp(-u * u / (w0 * w0)), 0.0);
    }
    return normalized(std::move(f));
  }
  if (init.kind == "airy-mode") {
    const CavityConfig cavity = config.cavity();
    const auto [meta, phi] =
        airy_mode(init.mode_n, cavity, fourier_plane_grid(grid, cavity.lambda, cavity.f));
    return from_fourier_plane(phi, cavity.lambda, cavity.f, grid);
  }
  if (init.kind == "tabulated") {
    if (init.file.empty()) throw ConfigError("initial.kind = tabulated needs initial.file");
    Field f = read_field_csv(init.file);
    if (f.grid() != grid)
      throw ConfigError("tabulated initial field grid does not match [grid]");
    return f;
  }
  throw ConfigError("unknown initial field kind '" + init.kind + "'");
}

struct PropagateSummary {
  std::vector<std::filesystem::path> snapshots;
  double final_norm_drift = 0.0;
};

// cmd_propagate driver: Strang evolution under the cavity-derived potential
// with |psi|^2 snapshots along the way. Norm drift beyond 1e-3 signals a
// numerical blow-up (NumericError).
inline PropagateSummary run_propagate(const SimConfig& config, std::size_t steps, double dt,
                                      std::size_t snap_every, std::uint64_t seed,
                                      const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const Grid1D grid = config.grid.make();
  const CavityConfig cavity = config.cavity();
  const Potential potential = cavity.mirror_potential();
  const LevyIndex alpha(cavity.alpha);
  const ScaleConstant d_alpha(cavity.d_alpha());

  Field psi = make_initial_field(config, grid);
  const double norm0 = norm_l2(psi);
  const std::string hash = config_hash(config);

  RunManifest manifest;
  manifest.command = "propagate";
  manifest.seed = seed;
  manifest.created_utc = runner_detail::utc_timestamp();
  manifest.config = config;

  PropagateSummary summary;
  const auto snap = [&](std::size_t index, std::size_t step) {
    char name[48];
    std::snprintf(name, sizeof(name), "snapshot_%06zu.csv", index);
    write_field_csv(out_dir / name,
                    "propagate t = " + io_detail::fmt(static_cast<double>(step) * dt), hash,
                    psi);
    manifest.outputs.push_back({"snapshot_csv", name});
    summary.snapshots.push_back(out_dir / name);
  };

  std::size_t snap_index = 0;
  snap(snap_index++, 0);
  if (steps > 0) {
    const std::size_t chunk = (snap_every == 0) ? steps : snap_every;
    std::size_t done = 0;
    while (done < steps) {
      const std::size_t todo = std::min(chunk, steps - done);
      psi = split_step(psi, potential, alpha, d_alpha, dt, todo);
      done += todo;
      snap(snap_index++, done);
      const double drift = std::abs(norm_l2(psi) - norm0) / norm0;
      summary.final_norm_drift = drift;
      if (drift > 1e-3)
        throw NumericError("propagation norm drift " + io_detail::fmt(drift) +
                           " exceeds 1e-3 after " + std::to_string(done) + " steps");
    }
  }
  write_manifest(out_dir / "manifest.txt", manifest);
  return summary;
}

struct Render2dSummary {
  std::filesystem::path map_csv;
  std::filesystem::path map_pgm;
};

// cmd_render2d driver: separable TEM_{n,m} intensity map at the Fourier
// plane, as CSV + PGM with axis files.
inline Render2dSummary run_render2d(const SimConfig& config, int n, int m,
                                    const std::optional<std::filesystem::path>& x_field_csv,
                                    std::uint64_t seed,
                                    const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const CavityConfig cavity = config.cavity();
  if (!config.mirror_radius)
    throw ConfigError("render2d needs a spherical mirror (cavity.R)");

  Field mode_x = [&]() {
    if (x_field_csv) return read_field_csv(*x_field_csv);
    const Grid1D gx(-config.render.x_half, config.render.x_half, config.render.nx);
    return airy_mode(n, cavity, gx).second;
  }();
  const Grid1D gy(-config.render.y_half, config.render.y_half, config.render.ny);
  const Field mode_y = hermite_gauss(m, cavity.lambda, cavity.f, *config.mirror_radius, gy);
  const Intensity2D map = assemble_2d(mode_x, mode_y);

  const std::string hash = config_hash(config);
  write_map_csv(out_dir / "map.csv", hash, map);
  write_pgm(out_dir / "map.pgm", map);
  write_csv(out_dir / "x_axis.csv", "render2d x axis", hash, {{"x_um", &map.x}});
  write_csv(out_dir / "y_axis.csv", "render2d y axis", hash, {{"y_um", &map.y}});

  RunManifest manifest;
  manifest.command = "render2d";
  manifest.seed = seed;
  manifest.created_utc = runner_detail::utc_timestamp();
  manifest.config = config;
  manifest.outputs.push_back({"map_csv", "map.csv"});
  manifest.outputs.push_back({"map_pgm", "map.pgm"});
  manifest.outputs.push_back({"x_axis_csv", "x_axis.csv"});
  manifest.outputs.push_back({"y_axis_csv", "y_axis.csv"});
  ManifestResult r;
  r.mode_index = n;
  r.status = "ok";
  manifest.results.push_back(r);
  write_manifest(out_dir / "manifest.txt", manifest);
  return {out_dir / "map.csv", out_dir / "map.pgm"};
}

}  // namespace fracavity

#endif  // FRACAVITY_RUNNER_HPP
