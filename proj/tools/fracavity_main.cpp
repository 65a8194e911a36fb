// fracavity: numerical simulator of the space-fractional Schrodinger
// equation realized as transverse light dynamics in a 4f optical cavity.
//
// Subcommands:
//   propagate   split-step evolution of an initial field
//   modes       lowest-threshold lasing mode at one pump offset
//   sweep       threshold searches over a set of pump offsets (parallel)
//   render2d    separable TEM_{n,m} intensity map at the Fourier plane
//
// Exit codes: 0 ok, 2 configuration, 3 numeric, 4 threshold bracket,
// 5 cavity stability.

#include <CLI11.hpp>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fracavity/fracavity.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kConfigExit = 2,
  kNumericExit = 3,
  kBracketExit = 4,
  kStabilityExit = 5,
};

fracavity::SimConfig load_config(const std::string& path) {
  return fracavity::parse_config(fracavity::io_detail::read_text(path));
}

// FRACAVITY_SEED overrides the configured seed; an explicit --seed flag
// overrides both.
std::uint64_t effective_seed(const fracavity::SimConfig& config,
                             const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("FRACAVITY_SEED")) {
    std::uint64_t v = 0;
    const char* end = env + std::string(env).size();
    const auto [p, ec] = std::from_chars(env, end, v);
    if (ec != std::errc{} || p != end)
      throw fracavity::ConfigError("FRACAVITY_SEED must be a decimal unsigned integer");
    return v;
  }
  return config.solver.seed;
}

std::vector<double> sweep_rhos(const std::optional<std::string>& range,
                               const std::optional<std::string>& list, int steps) {
  std::vector<double> rhos;
  if (list) {
    std::string item;
    std::istringstream in(*list);
    while (std::getline(in, item, ','))
      rhos.push_back(fracavity::config_detail::parse_length_um(item, "rho-list"));
    return rhos;
  }
  if (!range) throw fracavity::ConfigError("sweep needs --rho-range or --rho-list");
  const std::size_t colon = range->find(':');
  if (colon == std::string::npos)
    throw fracavity::ConfigError("--rho-range must be lo:hi (lengths with units)");
  const double lo = fracavity::config_detail::parse_length_um(range->substr(0, colon), "rho-range");
  const double hi = fracavity::config_detail::parse_length_um(range->substr(colon + 1), "rho-range");
  if (steps < 1) throw fracavity::ConfigError("--rho-steps must be >= 1");
  if (steps == 1) {
    rhos.push_back(lo);
    return rhos;
  }
  for (int i = 0; i < steps; ++i)
    rhos.push_back(lo + (hi - lo) * static_cast<double>(i) / (steps - 1));
  return rhos;
}

void print_mode_summary(const fracavity::ModeResult& mode, double rho) {
  std::printf("rho = %g um: mode n = %d, g0_threshold = %.6g, |sigma| = %.8g\n", rho,
              mode.mode_index, mode.g0_threshold, std::abs(mode.sigma));
  std::printf("  field overlap with analytic mode = %.6g, intensity overlap = %.6g%s\n",
              mode.overlap_with_oracle, mode.intensity_overlap,
              mode.degenerate ? "  [sector-degenerate: even mode reported]" : "");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracavity: fractional-Schrodinger laser cavity simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed_flag;

  // propagate
  auto* propagate = app.add_subcommand("propagate", "split-step evolution of an initial field");
  std::size_t steps = 0;
  double dt = 0.05;
  std::size_t snap_every = 0;
  propagate->add_option("config", config_path, "configuration file")->required();
  propagate->add_option("--steps", steps, "number of split steps")->required();
  propagate->add_option("--dt", dt, "time step in round-trip units");
  propagate->add_option("--snap-every", snap_every, "snapshot every N steps (0: final only)");
  propagate->add_option("--out", out_dir, "output directory");
  propagate->add_option("--seed", seed_flag, "random seed override");

  // modes
  auto* modes = app.add_subcommand("modes", "lowest-threshold lasing mode");
  std::optional<std::string> rho_flag;
  modes->add_option("config", config_path, "configuration file")->required();
  modes->add_option("--rho", rho_flag, "pump half-separation override (length with unit)");
  modes->add_option("--out", out_dir, "output directory");
  modes->add_option("--seed", seed_flag, "random seed override");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "threshold search over pump offsets");
  std::optional<std::string> rho_range;
  std::optional<std::string> rho_list;
  int rho_steps = 2;
  unsigned jobs = 1;
  sweep->add_option("config", config_path, "configuration file")->required();
  sweep->add_option("--rho-range", rho_range, "lo:hi pump offsets (lengths with units)");
  sweep->add_option("--rho-steps", rho_steps, "number of sweep points");
  sweep->add_option("--rho-list", rho_list, "comma-separated offsets (overrides range)");
  sweep->add_option("--jobs", jobs, "parallel workers");
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--seed", seed_flag, "random seed override");

  // render2d
  auto* render = app.add_subcommand("render2d", "2D TEM_{n,m} intensity map");
  int mode_n = 0, mode_m = 0;
  std::optional<std::string> x_field;
  render->add_option("config", config_path, "configuration file")->required();
  render->add_option("--n", mode_n, "x-direction mode index");
  render->add_option("--m", mode_m, "y-direction mode index");
  render->add_option("--x-field", x_field, "field CSV to use as the x factor");
  render->add_option("--out", out_dir, "output directory");
  render->add_option("--seed", seed_flag, "random seed override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigExit;
  }

  try {
    const fracavity::SimConfig config = load_config(config_path);
    const std::uint64_t seed = effective_seed(config, seed_flag);

    if (*propagate) {
      const auto summary =
          fracavity::run_propagate(config, steps, dt, snap_every, seed, out_dir);
      std::printf("propagate: %zu snapshot(s), final norm drift %.3g\n",
                  summary.snapshots.size(), summary.final_norm_drift);
    } else if (*modes) {
      std::optional<double> rho;
      if (rho_flag)
        rho = fracavity::config_detail::parse_length_um(*rho_flag, "rho");
      const auto summary = fracavity::run_modes(config, rho, seed, out_dir);
      print_mode_summary(summary.mode, rho.value_or(config.pump.rho));
    } else if (*sweep) {
      const std::vector<double> rhos = sweep_rhos(rho_range, rho_list, rho_steps);
      const auto summary = fracavity::run_sweep(config, rhos, jobs, seed, out_dir);
      std::printf("sweep: %zu point(s), %zu failure(s), table %s\n", summary.rows.size(),
                  summary.failures, summary.table_path.string().c_str());
      bool nondecreasing = true;
      int prev = -1;
      for (const auto& row : summary.rows) {
        if (row.status != "ok") continue;
        if (row.result.mode_index < prev) nondecreasing = false;
        prev = row.result.mode_index;
      }
      std::printf("sweep: mode index trend over rho is %s\n",
                  nondecreasing ? "nondecreasing" : "not monotone");
      if (summary.failures == summary.rows.size()) return kNumericExit;
    } else if (*render) {
      std::optional<std::filesystem::path> xf;
      if (x_field) xf = *x_field;
      const auto summary = fracavity::run_render2d(config, mode_n, mode_m, xf, seed, out_dir);
      std::printf("render2d: wrote %s and %s\n", summary.map_csv.string().c_str(),
                  summary.map_pgm.string().c_str());
    }
    return kOk;
  } catch (const fracavity::BracketError& e) {
    std::fprintf(stderr, "bracket error: %s\n", e.what());
    return kBracketExit;
  } catch (const fracavity::StabilityError& e) {
    std::fprintf(stderr, "stability error: %s\n", e.what());
    return kStabilityExit;
  } catch (const fracavity::ConvergenceError& e) {
    std::fprintf(stderr, "convergence error: %s\n", e.what());
    return kNumericExit;
  } catch (const fracavity::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kNumericExit;
  } catch (const fracavity::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigExit;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigExit;
  }
}
