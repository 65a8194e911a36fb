#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracavity/io.hpp"
#include "fracavity/runner.hpp"

using namespace fracavity;

namespace {

std::filesystem::path temp_dir(const char* tag) {
  const auto dir = std::filesystem::temp_directory_path() /
                   (std::string("fracavity_run_") + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

SimConfig small_fig2() {
  SimConfig c;  // reference cavity on a coarse grid for fast pipeline tests
  c.grid.x_half = 600.0;
  c.grid.n = 512;
  c.solver.max_iter = 20000;
  c.solver.oracle_modes = 24;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FRACAVITY_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

double csv_waist(const std::filesystem::path& p) {
  // intensity ~ exp(-2 x^2 / w^2) has <x^2> = w^2/4
  const Field f = read_field_csv(p);
  double m0 = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double i = std::norm(f[j]);
    m0 += i;
    m2 += i * f.grid().x(j) * f.grid().x(j);
  }
  return 2.0 * std::sqrt(m2 / m0);
}

}  // namespace

TEST_CASE("propagate driver: zero steps writes the input snapshot") {
  const auto dir = temp_dir("prop0");
  SimConfig c = small_fig2();
  c.initial.kind = "gaussian";
  c.initial.w0 = 50.0;
  const auto summary = run_propagate(c, 0, 0.05, 0, 1, dir);
  REQUIRE(summary.snapshots.size() == 1);
  const Field snap = read_field_csv(summary.snapshots[0]);
  const Field ref = make_initial_field(c, c.grid.make());
  for (std::size_t j = 0; j < snap.size(); j += 7)
    CHECK(std::abs(snap[j]) == doctest::Approx(std::abs(ref[j])).epsilon(1e-6));
  CHECK(std::filesystem::exists(dir / "manifest.txt"));
}

TEST_CASE("propagate driver: free alpha=2 Gaussian waist follows the analytic law") {
  const auto dir = temp_dir("prop_gauss");
  SimConfig c = small_fig2();
  c.alpha = 2.0;
  c.beta = 1e-8;  // Fourier-plane mask ~ off: free propagation
  c.mirror_radius.reset();
  c.mask_beta = 0.0;
  c.grid.n = 1024;
  c.initial.kind = "gaussian";
  c.initial.w0 = 40.0;
  const double d2 = c.cavity().d_alpha();
  // choose total time so the waist grows by exactly 2x
  const double t_total = std::sqrt(3.0) * c.initial.w0 * c.initial.w0 / (4.0 * d2);
  const std::size_t steps = 256;
  const auto summary = run_propagate(c, steps, t_total / steps, 0, 1, dir);
  REQUIRE(summary.snapshots.size() == 2);
  const double w_start = csv_waist(summary.snapshots[0]);
  const double w_end = csv_waist(summary.snapshots[1]);
  CHECK(w_start == doctest::Approx(c.initial.w0).epsilon(1e-3));
  CHECK(w_end / w_start == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(summary.final_norm_drift < 1e-10);
}

TEST_CASE("propagate driver: oracle-mode input keeps a stationary intensity") {
  const auto dir = temp_dir("prop_mode");
  SimConfig c = small_fig2();
  c.grid.n = 4096;
  c.initial.kind = "airy-mode";
  c.initial.mode_n = 0;
  const auto summary = run_propagate(c, 64, 0.25, 0, 1, dir);
  REQUIRE(summary.snapshots.size() == 2);
  const Field a = read_field_csv(summary.snapshots[0]);
  const Field b = read_field_csv(summary.snapshots[1]);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    num += std::pow(std::norm(b[j]) - std::norm(a[j]), 2);
    den += std::pow(std::norm(a[j]), 2);
  }
  // the default +-600 um window truncates the mode's algebraic tails, which
  // bounds how stationary the sampled eigenmode can be; the tight-tolerance
  // version of this check lives in the propagator suite on a wide window
  CHECK(std::sqrt(num / den) < 3e-2);
}

TEST_CASE("sweep driver: rho 0 row reproduces the single-run threshold") {
  const auto dir = temp_dir("sweep1");
  SimConfig c = small_fig2();
  const auto sweep = run_sweep(c, {0.0}, 1, c.solver.seed, dir);
  REQUIRE(sweep.rows.size() == 1);
  CHECK(sweep.rows[0].status == "ok");
  const ModeResult single = solve_modes_at(c, 0.0, runner_detail::job_seed(c.solver.seed, 0));
  CHECK(sweep.rows[0].result.g0_threshold == doctest::Approx(single.g0_threshold));
  CHECK(sweep.rows[0].result.mode_index == single.mode_index);
}

TEST_CASE("sweep driver: --jobs 1 and --jobs 4 give byte-identical tables") {
  const auto dir1 = temp_dir("sweepj1");
  const auto dir4 = temp_dir("sweepj4");
  SimConfig c = small_fig2();
  const std::vector<double> rhos = {0.0, 120.0, 200.0};
  run_sweep(c, rhos, 1, c.solver.seed, dir1);
  run_sweep(c, rhos, 4, c.solver.seed, dir4);
  CHECK(slurp(dir1 / "sweep.csv") == slurp(dir4 / "sweep.csv"));
}

TEST_CASE("modes driver writes profiles, oracle overlay, and a parsable manifest") {
  const auto dir = temp_dir("modes");
  SimConfig c = small_fig2();
  const auto summary = run_modes(c, 0.0, c.solver.seed, dir);
  CHECK(std::filesystem::exists(dir / "nearfield.csv"));
  CHECK(std::filesystem::exists(dir / "fourier.csv"));
  CHECK(std::filesystem::exists(dir / "oracle.csv"));
  const RunManifest m = parse_manifest(slurp(dir / "manifest.txt"));
  REQUIRE(m.results.size() == 1);
  CHECK(m.command == "modes");
  CHECK(m.results[0].mode_index == summary.mode.mode_index);
  CHECK(m.results[0].status == "ok");
  // every referenced output exists
  for (const auto& out : m.outputs) CHECK(std::filesystem::exists(dir / out.path));
}

TEST_CASE("render2d driver: separable map integrates back to the 1D profile") {
  const auto dir = temp_dir("render");
  SimConfig c = small_fig2();
  c.render.nx = 256;
  c.render.ny = 128;
  const auto summary = run_render2d(c, 2, 0, std::nullopt, 1, dir);
  CHECK(std::filesystem::exists(summary.map_pgm));

  // reconstruct the grids and check the y-marginal against the analytic mode
  const Grid1D gx(-c.render.x_half, c.render.x_half, c.render.nx);
  const Grid1D gy(-c.render.y_half, c.render.y_half, c.render.ny);
  const auto [meta, mx] = airy_mode(2, c.cavity(), gx);

  std::ifstream in(dir / "map.csv");
  std::string line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  REQUIRE(rows.size() == c.render.ny);
  REQUIRE(rows[0].size() == c.render.nx + 1);  // y_um + intensities
  for (std::size_t ix = 0; ix < c.render.nx; ix += 13) {
    double marginal = 0.0;
    for (std::size_t iy = 0; iy < c.render.ny; ++iy) marginal += rows[iy][ix + 1];
    marginal *= gy.dx();
    // Y mode is unit-norm, so the marginal equals |mode_x|^2
    CHECK(marginal == doctest::Approx(std::norm(mx[ix])).epsilon(1e-6));
  }
}

TEST_CASE("render2d driver accepts a field CSV as the x factor") {
  const auto dir = temp_dir("render_xfield");
  SimConfig c = small_fig2();
  c.render.nx = 256;
  c.render.ny = 64;

  // write an arbitrary complex field and use it as the x profile
  const Grid1D gx(-200.0, 200.0, 256);
  Field fx(gx);
  for (std::size_t j = 0; j < gx.size(); ++j)
    fx[j] = cplx(std::exp(-gx.x(j) * gx.x(j) / 3600.0), 0.0) *
            std::exp(cplx(0.0, 0.01 * gx.x(j)));
  write_field_csv(dir / "xfield.csv", "external", "0", fx);

  const auto summary = run_render2d(c, 0, 1, dir / "xfield.csv", 1, dir / "out");
  CHECK(std::filesystem::exists(summary.map_csv));
  CHECK(std::filesystem::exists(summary.map_pgm));
  const RunManifest m = parse_manifest(slurp(dir / "out" / "manifest.txt"));
  CHECK(m.outputs.size() == 4);
}

TEST_CASE("cli: exit codes for config, bracket, and stability failures") {
  const auto dir = temp_dir("cli");
  CHECK(run_cli("modes /nonexistent.cfg --out " + (dir / "a").string()) == 2);

  // bracket with no sign change: |sigma| is already above 1 at g_lo
  std::ofstream bad(dir / "bad_bracket.cfg");
  bad << "[cavity]\nlambda = 1064 nm\nf = 1 cm\nR = 50 cm\nalpha = 1\nbeta = 5e-3\nT = 0.97\n"
      << "[pump]\ng0 = 0.1\nrho = 0 um\nw_p = 28.284271247461902 um\n"
      << "[grid]\nx_half = 600 um\nn = 256\n"
      << "[solver]\nbracket_lo = 0.25\nbracket_hi = 0.3\n";
  bad.close();
  CHECK(run_cli("modes " + (dir / "bad_bracket.cfg").string() + " --out " +
                (dir / "b").string()) == 4);

  // unstable y cavity: R < 4f
  std::ofstream unst(dir / "unstable.cfg");
  unst << "[cavity]\nlambda = 1064 nm\nf = 1 cm\nR = 3 cm\nalpha = 1\nbeta = 5e-3\nT = 0.97\n"
       << "[pump]\ng0 = 0.1\nrho = 0 um\nw_p = 28.284271247461902 um\n"
       << "[grid]\nx_half = 600 um\nn = 256\n";
  unst.close();
  CHECK(run_cli("render2d " + (dir / "unstable.cfg").string() + " --n 0 --m 0 --out " +
                (dir / "c").string()) == 5);

  CHECK(run_cli("propagate /nonexistent.cfg --steps 1") == 2);
  CHECK(run_cli("definitely-not-a-subcommand") == 2);
}

TEST_CASE("cli: FRACAVITY_SEED env var overrides the configured seed") {
  const auto dir = temp_dir("cliseed");
  std::ofstream cfg(dir / "c.cfg");
  cfg << "[cavity]\nlambda = 1064 nm\nf = 1 cm\nR = 50 cm\nalpha = 1\nbeta = 5e-3\nT = 0.97\n"
      << "[pump]\ng0 = 0.05\nrho = 0 um\nw_p = 28.284271247461902 um\n"
      << "[grid]\nx_half = 600 um\nn = 256\n"
      << "[initial]\nkind = gaussian\nw0 = 40 um\n";
  cfg.close();
  const std::string base = std::string(FRACAVITY_BIN) + " propagate " +
                           (dir / "c.cfg").string() + " --steps 1 --out " +
                           (dir / "o").string();
  CHECK(WEXITSTATUS(std::system(("FRACAVITY_SEED=42 " + base + " >/dev/null 2>&1").c_str())) == 0);
  const RunManifest m = parse_manifest(slurp(dir / "o" / "manifest.txt"));
  CHECK(m.seed == 42);
}
