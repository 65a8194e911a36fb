#ifndef FRACAVITY_CONFIG_HPP
#define FRACAVITY_CONFIG_HPP

// Flat key = value configuration with [cavity], [pump], [grid], [solver]
// sections (plus [initial] and [render] for the respective drivers).
// Lengths carry an explicit unit suffix (nm/um/mm/cm/m) and are converted
// to micrometers exactly once, at parse time. serialize() and parse() are
// exact inverses for every valid configuration.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fracavity/cavity.hpp"
#include "fracavity/errors.hpp"

namespace fracavity {

namespace config_detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// full-precision, locale-independent double formatting
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double unit_factor_um(const std::string& unit) {
  if (unit == "nm") return 1e-3;
  if (unit == "um") return 1.0;
  if (unit == "mm") return 1e3;
  if (unit == "cm") return 1e4;
  if (unit == "m") return 1e6;
  throw ConfigError("unknown length unit '" + unit + "' (use nm/um/mm/cm/m)");
}

// "1064 nm", "50cm", "600 um" -> micrometers
inline double parse_length_um(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  std::size_t pos = 0;
  while (pos < t.size() &&
         (std::isdigit(static_cast<unsigned char>(t[pos])) || t[pos] == '+' || t[pos] == '-' ||
          t[pos] == '.' || t[pos] == 'e' || t[pos] == 'E'))
    ++pos;
  const std::string num = t.substr(0, pos);
  const std::string unit = trim(t.substr(pos));
  double value = 0.0;
  const auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
  if (ec != std::errc{} || p != num.data() + num.size())
    throw ConfigError("cannot parse length for '" + key + "': '" + text + "'");
  if (unit.empty())
    throw ConfigError("length '" + key + "' needs a unit suffix (nm/um/mm/cm/m): '" + text + "'");
  return value * unit_factor_um(unit);
}

inline double parse_number(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || p != t.data() + t.size())
    throw ConfigError("cannot parse number for '" + key + "': '" + text + "'");
  return value;
}

using SectionMap = std::map<std::string, std::map<std::string, std::string>>;

inline SectionMap parse_sections(const std::string& text) {
  SectionMap out;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      out[section];
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    out[section][key] = value;
  }
  return out;
}

}  // namespace config_detail

struct SolverConfig {
  double tol = 1e-8;
  int max_iter = 20000;
  double threshold_tol = 1e-4;
  double bracket_lo = 0.0;
  double bracket_hi = 0.3;
  double sector_resolution = 1e-3;
  int oracle_modes = 24;
  std::uint64_t seed = 123456789u;

  bool operator==(const SolverConfig&) const = default;
};

struct GridConfig {
  double x_half = 600.0;  // um
  std::size_t n = 4096;

  Grid1D make() const { return Grid1D(-x_half, x_half, n); }
  bool operator==(const GridConfig&) const = default;
};

struct InitialConfig {
  std::string kind = "gaussian";  // gaussian | airy-mode | tabulated
  double w0 = 40.0;               // um (gaussian)
  double x0 = 0.0;                // um (gaussian offset)
  int mode_n = 0;                 // airy-mode index
  std::string file;               // tabulated CSV path

  bool operator==(const InitialConfig&) const = default;
};

struct RenderConfig {
  std::size_t nx = 512;
  std::size_t ny = 512;
  double x_half = 360.0;  // um, Fourier-plane window
  double y_half = 600.0;  // um

  bool operator==(const RenderConfig&) const = default;
};

// Full simulator configuration: physical cavity, pump, numerical grid and
// solver settings, plus the per-driver extras.
struct SimConfig {
  double lambda = 1.064;  // um
  double f = 1.0e4;       // um
  double alpha = 1.0;
  double beta = 5.0e-3;   // (um)^-alpha
  std::optional<double> mirror_radius = 5.0e5;  // um; absent = flat mirror
  double mask_beta = 0.0;                       // flat-mirror power-law mask
  double mask_alpha = 2.0;
  double transmittance = 0.97;

  PumpProfile pump{0.0, 0.0, 28.284271247461902};

  GridConfig grid;
  SolverConfig solver;
  InitialConfig initial;
  RenderConfig render;

  bool operator==(const SimConfig&) const = default;

  CavityConfig cavity() const {
    CavityConfig c;
    c.lambda = lambda;
    c.f = f;
    c.alpha = alpha;
    c.beta = beta;
    if (mirror_radius)
      c.mirror = SphericalMirror{*mirror_radius};
    else if (mask_beta > 0.0)
      c.mirror = FlatWithMask{Potential::power_law(mask_beta, mask_alpha)};
    else
      c.mirror = FlatWithMask{Potential::none()};
    c.transmittance = transmittance;
    c.pump = pump;
    c.validate();
    return c;
  }
};

inline std::string serialize(const SimConfig& c) {
  using config_detail::fmt_double;
  std::ostringstream out;
  out << "[cavity]\n";
  out << "lambda = " << fmt_double(c.lambda) << " um\n";
  out << "f = " << fmt_double(c.f) << " um\n";
  if (c.mirror_radius) out << "R = " << fmt_double(*c.mirror_radius) << " um\n";
  out << "alpha = " << fmt_double(c.alpha) << "\n";
  out << "beta = " << fmt_double(c.beta) << "\n";
  out << "mask_beta = " << fmt_double(c.mask_beta) << "\n";
  out << "mask_alpha = " << fmt_double(c.mask_alpha) << "\n";
  out << "T = " << fmt_double(c.transmittance) << "\n";
  out << "\n[pump]\n";
  out << "g0 = " << fmt_double(c.pump.g0) << "\n";
  out << "rho = " << fmt_double(c.pump.rho) << " um\n";
  out << "w_p = " << fmt_double(c.pump.w_p) << " um\n";
  out << "\n[grid]\n";
  out << "x_half = " << fmt_double(c.grid.x_half) << " um\n";
  out << "n = " << c.grid.n << "\n";
  out << "\n[solver]\n";
  out << "tol = " << fmt_double(c.solver.tol) << "\n";
  out << "max_iter = " << c.solver.max_iter << "\n";
  out << "threshold_tol = " << fmt_double(c.solver.threshold_tol) << "\n";
  out << "bracket_lo = " << fmt_double(c.solver.bracket_lo) << "\n";
  out << "bracket_hi = " << fmt_double(c.solver.bracket_hi) << "\n";
  out << "sector_resolution = " << fmt_double(c.solver.sector_resolution) << "\n";
  out << "oracle_modes = " << c.solver.oracle_modes << "\n";
  out << "seed = " << c.solver.seed << "\n";
  out << "\n[initial]\n";
  out << "kind = " << c.initial.kind << "\n";
  out << "w0 = " << fmt_double(c.initial.w0) << " um\n";
  out << "x0 = " << fmt_double(c.initial.x0) << " um\n";
  out << "mode_n = " << c.initial.mode_n << "\n";
  if (!c.initial.file.empty()) out << "file = " << c.initial.file << "\n";
  out << "\n[render]\n";
  out << "nx = " << c.render.nx << "\n";
  out << "ny = " << c.render.ny << "\n";
  out << "x_half = " << fmt_double(c.render.x_half) << " um\n";
  out << "y_half = " << fmt_double(c.render.y_half) << " um\n";
  return out.str();
}

inline SimConfig parse_config(const std::string& text) {
  using namespace config_detail;
  const SectionMap sec = parse_sections(text);
  SimConfig c;
  c.mirror_radius.reset();

  const auto get = [&](const std::string& s, const std::string& k) -> const std::string* {
    const auto si = sec.find(s);
    if (si == sec.end()) return nullptr;
    const auto ki = si->second.find(k);
    return (ki == si->second.end()) ? nullptr : &ki->second;
  };
  const auto length = [&](const std::string& s, const std::string& k, double& dst) {
    if (const std::string* v = get(s, k)) dst = parse_length_um(*v, k);
  };
  const auto number = [&](const std::string& s, const std::string& k, double& dst) {
    if (const std::string* v = get(s, k)) dst = parse_number(*v, k);
  };
  const auto integer = [&](const std::string& s, const std::string& k, auto& dst) {
    if (const std::string* v = get(s, k)) {
      const double d = parse_number(*v, k);
      dst = static_cast<std::decay_t<decltype(dst)>>(d);
      if (static_cast<double>(dst) != d)
        throw ConfigError("'" + k + "' must be an integer: '" + *v + "'");
    }
  };

  length("cavity", "lambda", c.lambda);
  length("cavity", "f", c.f);
  if (const std::string* v = get("cavity", "R")) c.mirror_radius = parse_length_um(*v, "R");
  number("cavity", "alpha", c.alpha);
  number("cavity", "beta", c.beta);
  number("cavity", "mask_beta", c.mask_beta);
  number("cavity", "mask_alpha", c.mask_alpha);
  number("cavity", "T", c.transmittance);

  number("pump", "g0", c.pump.g0);
  length("pump", "rho", c.pump.rho);
  length("pump", "w_p", c.pump.w_p);

  length("grid", "x_half", c.grid.x_half);
  integer("grid", "n", c.grid.n);

  number("solver", "tol", c.solver.tol);
  integer("solver", "max_iter", c.solver.max_iter);
  number("solver", "threshold_tol", c.solver.threshold_tol);
  number("solver", "bracket_lo", c.solver.bracket_lo);
  number("solver", "bracket_hi", c.solver.bracket_hi);
  number("solver", "sector_resolution", c.solver.sector_resolution);
  integer("solver", "oracle_modes", c.solver.oracle_modes);
  if (const std::string* v = get("solver", "seed")) {
    // full 64-bit range; doubles would truncate large seeds
    const std::string t = trim(*v);
    std::uint64_t seed = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), seed);
    if (ec != std::errc{} || p != t.data() + t.size())
      throw ConfigError("seed must be a decimal unsigned integer: '" + *v + "'");
    c.solver.seed = seed;
  }

  if (const std::string* v = get("initial", "kind")) c.initial.kind = *v;
  length("initial", "w0", c.initial.w0);
  length("initial", "x0", c.initial.x0);
  integer("initial", "mode_n", c.initial.mode_n);
  if (const std::string* v = get("initial", "file")) c.initial.file = *v;

  integer("render", "nx", c.render.nx);
  integer("render", "ny", c.render.ny);
  length("render", "x_half", c.render.x_half);
  length("render", "y_half", c.render.y_half);

  if (c.initial.kind != "gaussian" && c.initial.kind != "airy-mode" &&
      c.initial.kind != "tabulated")
    throw ConfigError("initial.kind must be gaussian, airy-mode, or tabulated");
  return c;
}

// FNV-1a over the serialized snapshot; ties output files to their exact
// configuration.
inline std::string config_hash(const SimConfig& c) {
  const std::string s = serialize(c);
  std::uint64_t h = 1469598103934665603ull;
  for (const char ch : s) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fracavity

#endif  // FRACAVITY_CONFIG_HPP
