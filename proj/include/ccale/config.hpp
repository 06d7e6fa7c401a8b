#ifndef CCALE_CONFIG_HPP
#define CCALE_CONFIG_HPP

// Run configuration and its INI form. Sections: [run], [case], [rezone], [remap], [mof], [output].
// Keys in [case] are numeric overrides passed straight to the preset.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ccale/cases.hpp"
#include "ccale/error.hpp"
#include "ccale/lagrange.hpp"
#include "ccale/mof.hpp"
#include "ccale/remap.hpp"
#include "ccale/rezone.hpp"

namespace ccale {

enum class Mode : std::uint8_t { lagrangian, eulerian, ale };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::lagrangian: return "lagrangian";
    case Mode::eulerian: return "eulerian";
    case Mode::ale: return "ale";
  }
  return "ale";
}

inline Mode mode_from_string(const std::string& s) {
  if (s == "lagrangian") return Mode::lagrangian;
  if (s == "eulerian") return Mode::eulerian;
  if (s == "ale") return Mode::ale;
  throw Error(ErrorKind::config, "unknown mode '" + s + "'");
}

struct RunConfig {
  std::string case_name = "sedov";
  cases::Params params;
  double scale = 1.0;
  Mode mode = Mode::ale;
  double until = -1.0;        // negative: the preset's end time
  long max_cycles = 1000000;
  lagrange::Options lagrange;
  rezone::RezoneConfig rezone;
  double displacement_cap = 0.4;  // rezone displacement limit, fraction of the shortest incident edge
  remap::Options remap;
  mof::CentroidMode mof_mode = mof::CentroidMode::axisymmetric;
  std::string out_dir;        // empty: no artifacts
  long output_every = 0;      // cycles between snapshots, 0 disables
  double output_dt = 0.0;     // time between snapshots, 0 disables
  int profile_bins = 100;
  double schlieren_k = 15.0;

  void validate() const {
    if (!(scale > 0.0)) throw Error(ErrorKind::config, "scale must be positive");
    if (max_cycles <= 0) throw Error(ErrorKind::config, "max_cycles must be positive");
    if (!(lagrange.cfl > 0.0 && lagrange.cfl <= 1.0)) throw Error(ErrorKind::config, "cfl must lie in (0, 1]");
    if (output_every < 0 || output_dt < 0.0) throw Error(ErrorKind::config, "output cadence must be non-negative");
    if (profile_bins <= 0) throw Error(ErrorKind::config, "profile_bins must be positive");
    if (!(displacement_cap > 0.0 && displacement_cap <= 1.0))
      throw Error(ErrorKind::config, "displacement_cap must lie in (0, 1]");
    rezone.validate();
  }
};

namespace detail {

inline rezone::Smoother smoother_from(const std::string& s) {
  if (s == "cns") return rezone::Smoother::cns;
  if (s == "gcns") return rezone::Smoother::gcns;
  throw Error(ErrorKind::config, "unknown smoother '" + s + "'");
}
inline const char* to_string(rezone::Smoother s) { return s == rezone::Smoother::cns ? "cns" : "gcns"; }

inline rezone::BoundaryMode boundary_from(const std::string& s) {
  if (s == "off") return rezone::BoundaryMode::off;
  if (s == "straight") return rezone::BoundaryMode::straight_only;
  if (s == "bezier") return rezone::BoundaryMode::bezier;
  throw Error(ErrorKind::config, "unknown boundary mode '" + s + "'");
}
inline const char* to_string(rezone::BoundaryMode b) {
  return b == rezone::BoundaryMode::off ? "off" : b == rezone::BoundaryMode::bezier ? "bezier" : "straight";
}

/// Value at `key`, or `fallback` when absent. A present value that does not convert is an error.
template <class T>
T get(const boost::property_tree::ptree& pt, const std::string& key, T fallback) {
  if (!pt.get_optional<std::string>(key)) return fallback;
  const auto v = pt.get_optional<T>(key);
  if (!v) throw Error(ErrorKind::config, "bad value for '" + key + "'");
  return *v;
}

}  // namespace detail

/// Reads INI text. Unknown sections are rejected so typos do not pass silently.
inline RunConfig parse_config(std::istream& is) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::config, e.what());
  }
  for (const auto& entry : tree) {
    static const char* known[] = {"run", "case", "rezone", "remap", "mof", "output"};
    bool ok = false;
    for (const char* k : known) ok = ok || entry.first == k;
    if (!ok) throw Error(ErrorKind::config, "unknown section or key outside a section: '" + entry.first + "'");
  }
  using detail::get;
  RunConfig c;
  c.case_name = get<std::string>(tree, "run.case", c.case_name);
  c.mode = mode_from_string(get<std::string>(tree, "run.mode", to_string(c.mode)));
  c.scale = get(tree, "run.scale", c.scale);
  c.until = get(tree, "run.until", c.until);
  c.max_cycles = get(tree, "run.max_cycles", c.max_cycles);
  c.lagrange.cfl = get(tree, "run.cfl", c.lagrange.cfl);
  c.lagrange.max_growth = get(tree, "run.max_volume_change", c.lagrange.max_growth);
  c.lagrange.dt_growth = get(tree, "run.dt_growth", c.lagrange.dt_growth);
  if (const auto cs = tree.get_child_optional("case"))
    for (const auto& [key, v] : *cs) {
      try {
        c.params.values[key] = v.get_value<double>();
      } catch (const pt::ptree_bad_data&) {
        throw Error(ErrorKind::config, "case parameter '" + key + "' is not a number");
      }
    }
  c.rezone.iterations = get(tree, "rezone.iterations", c.rezone.iterations);
  c.rezone.smoother = detail::smoother_from(get<std::string>(tree, "rezone.smoother", detail::to_string(c.rezone.smoother)));
  c.rezone.boundary = detail::boundary_from(get<std::string>(tree, "rezone.boundary", detail::to_string(c.rezone.boundary)));
  const std::string om = get<std::string>(tree, "rezone.omega_mode", "adaptive");
  if (om != "fixed" && om != "adaptive") throw Error(ErrorKind::config, "unknown omega_mode '" + om + "'");
  c.rezone.omega_mode = om == "fixed" ? rezone::OmegaMode::fixed : rezone::OmegaMode::adaptive;
  c.rezone.omega = get(tree, "rezone.omega", c.rezone.omega);
  c.rezone.mu = get(tree, "rezone.mu", c.rezone.mu);
  c.rezone.interfacial_polar = get(tree, "rezone.interfacial_polar", c.rezone.interfacial_polar);
  c.displacement_cap = get(tree, "rezone.displacement_cap", c.displacement_cap);
  c.remap.limiter = get(tree, "remap.limiter", c.remap.limiter);
  c.remap.hybrid = get(tree, "remap.hybrid", c.remap.hybrid);
  c.remap.coverage_tolerance = get(tree, "remap.coverage_tolerance", c.remap.coverage_tolerance);
  c.remap.min_fraction = get(tree, "remap.min_fraction", c.remap.min_fraction);
  const std::string cm = get<std::string>(tree, "mof.centroid", "axisymmetric");
  if (cm != "planar" && cm != "axisymmetric") throw Error(ErrorKind::config, "unknown mof centroid '" + cm + "'");
  c.mof_mode = cm == "planar" ? mof::CentroidMode::planar : mof::CentroidMode::axisymmetric;
  c.out_dir = get<std::string>(tree, "output.dir", c.out_dir);
  c.output_every = get(tree, "output.every", c.output_every);
  c.output_dt = get(tree, "output.dt", c.output_dt);
  c.profile_bins = get(tree, "output.profile_bins", c.profile_bins);
  c.schlieren_k = get(tree, "output.schlieren_k", c.schlieren_k);
  c.validate();
  return c;
}

inline RunConfig parse_config_string(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::io, "cannot open config '" + path + "'");
  return parse_config(is);
}

namespace detail {
/// Shortest text that reads back as the same double.
inline std::string exact(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, r.ptr};
}
}  // namespace detail

/// Effective configuration in INI form; parsing it back yields the same RunConfig.
inline std::string to_ini(const RunConfig& c) {
  using detail::exact;
  std::ostringstream os;
  os << "[run]\ncase = " << c.case_name << "\nmode = " << to_string(c.mode) << "\nscale = " << exact(c.scale)
     << "\nuntil = " << exact(c.until) << "\nmax_cycles = " << c.max_cycles << "\ncfl = " << exact(c.lagrange.cfl)
     << "\nmax_volume_change = " << exact(c.lagrange.max_growth) << "\ndt_growth = " << exact(c.lagrange.dt_growth) << "\n\n";
  os << "[case]\n";
  for (const auto& [k, v] : c.params.values) os << k << " = " << exact(v) << "\n";
  os << "\n[rezone]\niterations = " << c.rezone.iterations << "\nsmoother = " << detail::to_string(c.rezone.smoother)
     << "\nboundary = " << detail::to_string(c.rezone.boundary)
     << "\nomega_mode = " << (c.rezone.omega_mode == rezone::OmegaMode::fixed ? "fixed" : "adaptive")
     << "\nomega = " << exact(c.rezone.omega) << "\nmu = " << exact(c.rezone.mu)
     << "\ninterfacial_polar = " << (c.rezone.interfacial_polar ? "true" : "false")
     << "\ndisplacement_cap = " << exact(c.displacement_cap) << "\n\n";
  os << "[remap]\nlimiter = " << (c.remap.limiter ? "true" : "false") << "\nhybrid = " << (c.remap.hybrid ? "true" : "false")
     << "\ncoverage_tolerance = " << exact(c.remap.coverage_tolerance) << "\nmin_fraction = " << exact(c.remap.min_fraction) << "\n\n";
  os << "[mof]\ncentroid = " << (c.mof_mode == mof::CentroidMode::planar ? "planar" : "axisymmetric") << "\n\n";
  os << "[output]\ndir = " << c.out_dir << "\nevery = " << c.output_every << "\ndt = " << exact(c.output_dt)
     << "\nprofile_bins = " << c.profile_bins << "\nschlieren_k = " << exact(c.schlieren_k) << "\n";
  return os.str();
}

}  // namespace ccale

#endif  // CCALE_CONFIG_HPP
