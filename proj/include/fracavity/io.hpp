#ifndef FRACAVITY_IO_HPP
#define FRACAVITY_IO_HPP

// File formats: CSV (UTF-8, comma separator, '#' header comments carrying
// provenance), binary 8-bit PGM (P5) for 2D intensity maps, and the run
// manifest -- the same key = value dialect as the config, with the config
// snapshot embedded under [config.*] sections.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fracavity/config.hpp"
#include "fracavity/errors.hpp"
#include "fracavity/grid.hpp"
#include "fracavity/oracle.hpp"
#include "fracavity/version.hpp"

namespace fracavity {

namespace io_detail {

// fixed formatting so byte-identical reruns come out of identical inputs
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace io_detail

struct CsvColumn {
  std::string name;
  const std::vector<double>* values;
};

inline void write_csv(const std::filesystem::path& path, const std::string& title,
                      const std::string& hash, std::vector<CsvColumn> columns) {
  if (columns.empty()) throw ConfigError("write_csv: no columns");
  const std::size_t rows = columns.front().values->size();
  for (const auto& c : columns)
    if (c.values->size() != rows) throw ConfigError("write_csv: ragged columns");
  std::ostringstream out;
  out << "# fracavity " << title << "\n";
  out << "# config_hash = " << hash << "\n";
  out << "# columns: ";
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << columns[i].name << (i + 1 < columns.size() ? "," : "\n");
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << columns[i].name << (i + 1 < columns.size() ? "," : "\n");
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i)
      out << io_detail::fmt((*columns[i].values)[r]) << (i + 1 < columns.size() ? "," : "\n");
  }
  io_detail::write_text(path, out.str());
}

// Field profile as x_um, intensity, phase.
inline void write_field_csv(const std::filesystem::path& path, const std::string& title,
                            const std::string& hash, const Field& field) {
  const std::size_t n = field.size();
  std::vector<double> x(n), intensity(n), phase(n);
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = field.grid().x(j);
    intensity[j] = std::norm(field[j]);
    phase[j] = std::arg(field[j]);
  }
  write_csv(path, title, hash,
            {{"x_um", &x}, {"intensity", &intensity}, {"phase", &phase}});
}

// Reads a field CSV written by write_field_csv (or any x_um,intensity,phase
// table on a uniform power-of-two grid).
inline Field read_field_csv(const std::filesystem::path& path) {
  std::istringstream in(io_detail::read_text(path));
  std::string line;
  std::vector<double> x, intensity, phase;
  bool header_skipped = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!header_skipped) {  // column-name row
      header_skipped = true;
      continue;
    }
    double a, b, c;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3)
      throw ConfigError("bad CSV row in '" + path.string() + "': " + line);
    x.push_back(a);
    intensity.push_back(b);
    phase.push_back(c);
  }
  if (x.size() < 2) throw ConfigError("field CSV too short: '" + path.string() + "'");
  const double dx = x[1] - x[0];
  Grid1D grid(x.front(), x.back() + dx, x.size());
  Field f(grid);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double amp = std::sqrt(std::max(0.0, intensity[j]));
    f[j] = amp * cplx(std::cos(phase[j]), std::sin(phase[j]));
  }
  return f;
}

// Max-normalized binary PGM; the peak pixel is exactly 255.
inline void write_pgm(const std::filesystem::path& path, const Intensity2D& map) {
  const std::size_t nx = map.x.size(), ny = map.y.size();
  double peak = 0.0;
  for (const double v : map.values) peak = std::max(peak, v);
  std::ostringstream out(std::ios::binary);
  out << "P5\n" << nx << " " << ny << "\n255\n";
  for (std::size_t r = 0; r < ny; ++r) {
    for (std::size_t c = 0; c < nx; ++c) {
      const double v = map.values[r * nx + c];
      const int pix = (peak > 0.0) ? static_cast<int>(255.0 * v / peak + 0.5) : 0;
      out.put(static_cast<char>(pix > 255 ? 255 : pix));
    }
  }
  io_detail::write_text(path, out.str());
}

// 2D intensity map as CSV: first column y_um, remaining columns the
// intensities over x (one row per y sample).
inline void write_map_csv(const std::filesystem::path& path, const std::string& hash,
                          const Intensity2D& map) {
  std::ostringstream out;
  out << "# fracavity render2d intensity map\n";
  out << "# config_hash = " << hash << "\n";
  out << "# rows: y_um; columns: intensity at x_um from x_axis.csv\n";
  const std::size_t nx = map.x.size(), ny = map.y.size();
  for (std::size_t r = 0; r < ny; ++r) {
    out << io_detail::fmt(map.y[r]);
    for (std::size_t c = 0; c < nx; ++c) out << "," << io_detail::fmt(map.values[r * nx + c]);
    out << "\n";
  }
  io_detail::write_text(path, out.str());
}

// One solved-mode record inside a manifest.
struct ManifestResult {
  double rho_um = 0.0;
  int mode_index = -1;
  double g0_threshold = 0.0;
  double sigma_re = 0.0;
  double sigma_im = 0.0;
  double overlap = 0.0;
  double intensity_overlap = 0.0;
  bool degenerate = false;
  std::int64_t iterations = 0;
  std::string status = "ok";

  bool operator==(const ManifestResult&) const = default;
};

struct ManifestOutput {
  std::string kind;
  std::string path;

  bool operator==(const ManifestOutput&) const = default;
};

// Run manifest: tool/version/command/seed/timestamps, the exact config
// snapshot, referenced output files, and per-job results.
struct RunManifest {
  std::string command;
  std::string version = kVersion;
  std::uint64_t seed = 0;
  std::string created_utc;  // ISO-8601; informational, not hashed
  SimConfig config;
  std::vector<ManifestOutput> outputs;
  std::vector<ManifestResult> results;

  bool operator==(const RunManifest&) const = default;
};

inline std::string serialize_manifest(const RunManifest& m) {
  using config_detail::fmt_double;
  std::ostringstream out;
  out << "[run]\n";
  out << "tool = fracavity\n";
  out << "version = " << m.version << "\n";
  out << "command = " << m.command << "\n";
  out << "seed = " << m.seed << "\n";
  out << "created_utc = " << m.created_utc << "\n";
  out << "config_hash = " << config_hash(m.config) << "\n";

  // embed the config snapshot under config.* sections
  std::istringstream cfg(serialize(m.config));
  std::string line;
  out << "\n";
  while (std::getline(cfg, line)) {
    if (!line.empty() && line.front() == '[')
      out << "[config." << line.substr(1);
    else
      out << line;
    out << "\n";
  }

  for (std::size_t i = 0; i < m.outputs.size(); ++i) {
    out << "\n[output." << i << "]\n";
    out << "kind = " << m.outputs[i].kind << "\n";
    out << "path = " << m.outputs[i].path << "\n";
  }
  for (std::size_t i = 0; i < m.results.size(); ++i) {
    const ManifestResult& r = m.results[i];
    out << "\n[result." << i << "]\n";
    out << "rho_um = " << fmt_double(r.rho_um) << "\n";
    out << "mode_index = " << r.mode_index << "\n";
    out << "g0_threshold = " << fmt_double(r.g0_threshold) << "\n";
    out << "sigma_re = " << fmt_double(r.sigma_re) << "\n";
    out << "sigma_im = " << fmt_double(r.sigma_im) << "\n";
    out << "overlap = " << fmt_double(r.overlap) << "\n";
    out << "intensity_overlap = " << fmt_double(r.intensity_overlap) << "\n";
    out << "degenerate = " << (r.degenerate ? 1 : 0) << "\n";
    out << "iterations = " << r.iterations << "\n";
    out << "status = " << r.status << "\n";
  }
  return out.str();
}

inline RunManifest parse_manifest(const std::string& text) {
  using namespace config_detail;
  const SectionMap sec = parse_sections(text);
  RunManifest m;

  const auto run = sec.find("run");
  if (run == sec.end()) throw ConfigError("manifest: missing [run] section");
  const auto get_run = [&](const char* key) -> std::string {
    const auto it = run->second.find(key);
    if (it == run->second.end())
      throw ConfigError(std::string("manifest: missing run key '") + key + "'");
    return it->second;
  };
  m.command = get_run("command");
  m.version = get_run("version");
  m.created_utc = get_run("created_utc");
  {
    const std::string s = get_run("seed");
    std::uint64_t seed = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (ec != std::errc{} || p != s.data() + s.size())
      throw ConfigError("manifest: bad seed '" + s + "'");
    m.seed = seed;
  }

  // reassemble the embedded config text
  std::ostringstream cfg;
  for (const auto& [name, kv] : sec) {
    if (name.rfind("config.", 0) != 0) continue;
    cfg << "[" << name.substr(7) << "]\n";
    for (const auto& [k, v] : kv) cfg << k << " = " << v << "\n";
  }
  m.config = parse_config(cfg.str());

  for (std::size_t i = 0;; ++i) {
    const auto it = sec.find("output." + std::to_string(i));
    if (it == sec.end()) break;
    ManifestOutput o;
    o.kind = it->second.at("kind");
    o.path = it->second.at("path");
    m.outputs.push_back(std::move(o));
  }
  for (std::size_t i = 0;; ++i) {
    const auto it = sec.find("result." + std::to_string(i));
    if (it == sec.end()) break;
    const auto& kv = it->second;
    ManifestResult r;
    r.rho_um = parse_number(kv.at("rho_um"), "rho_um");
    r.mode_index = static_cast<int>(parse_number(kv.at("mode_index"), "mode_index"));
    r.g0_threshold = parse_number(kv.at("g0_threshold"), "g0_threshold");
    r.sigma_re = parse_number(kv.at("sigma_re"), "sigma_re");
    r.sigma_im = parse_number(kv.at("sigma_im"), "sigma_im");
    r.overlap = parse_number(kv.at("overlap"), "overlap");
    r.intensity_overlap = parse_number(kv.at("intensity_overlap"), "intensity_overlap");
    r.degenerate = parse_number(kv.at("degenerate"), "degenerate") != 0.0;
    r.iterations = static_cast<std::int64_t>(parse_number(kv.at("iterations"), "iterations"));
    r.status = kv.at("status");
    m.results.push_back(std::move(r));
  }
  return m;
}

inline void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  // every referenced output must exist before the manifest is finalized
  for (const ManifestOutput& o : m.outputs) {
    const std::filesystem::path p = path.parent_path() / o.path;
    if (!std::filesystem::exists(p))
      throw ConfigError("manifest references missing output '" + o.path + "'");
  }
  io_detail::write_text(path, serialize_manifest(m));
}

}  // namespace fracavity

#endif  // FRACAVITY_IO_HPP
