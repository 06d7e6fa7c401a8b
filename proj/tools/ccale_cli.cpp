// Command line front end: full runs, the static MOF suite and the static rezone harness.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ccale/ccale.hpp"

using namespace ccale;

namespace {

enum Exit { ok = 0, bad_input = 2, run_failed = 3 };

const std::map<std::string, Geometry> geometries{{"planar", Geometry::planar}, {"axisymmetric", Geometry::axisymmetric}};
const std::map<std::string, mof::CentroidMode> centroid_modes{{"planar", mof::CentroidMode::planar},
                                                               {"axisymmetric", mof::CentroidMode::axisymmetric}};

std::string numbered(const std::string& dir, const std::string& stem, int i, const std::string& ext) {
  std::ostringstream os;
  os << dir << '/' << stem << std::setw(5) << std::setfill('0') << i << ext;
  return os.str();
}

void make_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create directory '" + dir + "'");
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

struct RunArgs {
  std::string config, case_name, mode, out;
  double scale = -1.0, until = -2.0;
  long every = -1, progress = 100;
};

int do_run(const RunArgs& a) {
  RunConfig cfg = a.config.empty() ? RunConfig{} : load_config(a.config);
  if (!a.case_name.empty()) cfg.case_name = a.case_name;
  if (!a.mode.empty()) cfg.mode = mode_from_string(a.mode);
  if (a.scale > 0.0) cfg.scale = a.scale;
  if (a.until > -2.0) cfg.until = a.until;
  if (!a.out.empty()) cfg.out_dir = a.out;
  if (a.every >= 0) cfg.output_every = a.every;
  cfg.validate();

  std::printf("case %s, mode %s, scale %g%s%s\n", cfg.case_name.c_str(), to_string(cfg.mode), cfg.scale,
              cfg.out_dir.empty() ? "" : ", output ", cfg.out_dir.c_str());
  const auto observer = [&](const Simulation& sim) {
    if (a.progress > 0 && sim.cycle() % a.progress == 0) {
      const io::LogRow& r = sim.last_log();
      std::printf("cycle %6ld  t %.6g  dt %.3e  mixed %4zu  mass drift %.2e  energy drift %.2e\n", r.cycle, r.t, r.dt,
                  r.mixed, r.mass_drift, r.energy_drift);
      std::fflush(stdout);
    }
  };
  const RunSummary s = run(cfg, observer);
  std::printf("finished: %ld cycles, t = %.10g, mass drift %.3e, energy drift %.3e, max remap delta %.3e, %d snapshots\n",
              s.cycles, s.t, s.mass_drift, s.energy_drift, s.max_remap_delta, s.snapshots);
  return ok;
}

// ---------------------------------------------------------------------------
// mof-static
// ---------------------------------------------------------------------------

struct MofArgs {
  std::string layout = "all", out;
  double chi = 64.0;
  int segments = 0;  // 0: chords for chi >= 64, fine arcs below
  Geometry geometry = Geometry::planar;
  mof::CentroidMode centroid = mof::CentroidMode::planar;
  int circle_levels = 4;
};

int do_mof(const MofArgs& a) {
  std::vector<mof::Layout> layouts;
  for (auto l : {mof::Layout::filament, mof::Layout::t_junction, mof::Layout::y_junction})
    if (a.layout == "all" || a.layout == mof::to_string(l)) layouts.push_back(l);
  if (layouts.empty()) throw Error(ErrorKind::config, "unknown layout '" + a.layout + "'");

  std::ofstream csv;
  if (!a.out.empty()) {
    csv = io::open_out(a.out);
    csv << "layout,kind,material,vertex,x,y\n" << std::setprecision(17);
  }
  const int segments = a.segments > 0 ? a.segments : a.chi >= 64.0 ? 1 : 200;
  for (auto l : layouts) {
    const mof::StaticResult r = mof::run_static(l, a.chi, segments, a.geometry, a.centroid);
    std::printf("%-10s chi %g:", mof::to_string(l), a.chi);
    for (std::size_t k = 0; k < r.symdiff.size(); ++k) std::printf("  material %zu symdiff %.3e", k, r.symdiff[k]);
    std::printf("\n");
    if (!csv.is_open()) continue;
    const auto dump = [&](const char* kind, const std::vector<Polygon>& polys) {
      for (std::size_t k = 0; k < polys.size(); ++k)
        for (std::size_t v = 0; v < polys[k].size(); ++v)
          csv << mof::to_string(l) << ',' << kind << ',' << k << ',' << v << ',' << polys[k][v].x << ','
              << polys[k][v].y << '\n';
    };
    dump("truth", r.truth);
    dump("reconstruction", r.partition.pieces);
  }

  if (a.circle_levels > 1) {
    std::printf("circle of radius 0.3 centred at (0.5, 0.5):\n");
    double prev = 0.0;
    for (int i = 0, n = 8; i < a.circle_levels; ++i, n *= 2) {
      const double e = mof::circle_error(n, {0.5, 0.5}, 0.3, a.geometry, a.centroid);
      if (i == 0)
        std::printf("  n %4d  error %.4e\n", n, e);
      else
        std::printf("  n %4d  error %.4e  order %.3f\n", n, e, std::log2(prev / e));
      prev = e;
    }
  }
  return ok;
}

// ---------------------------------------------------------------------------
// rezone-static and mesh
// ---------------------------------------------------------------------------

struct RezoneArgs {
  std::string mesh, out, smoother = "gcns", boundary = "straight";
  int sweeps = 100, every = 1;
  bool interfacial_polar = false;
};

int do_rezone(const RezoneArgs& a) {
  const Mesh mesh = io::read_mesh(a.mesh);
  const ValidationReport rep0 = validate(mesh);
  if (!rep0.ok()) throw Error(ErrorKind::invalid_cell, "input mesh is invalid", rep0.invalid_cells.empty() ? -1 : rep0.invalid_cells.front());
  rezone::RezoneConfig cfg;
  cfg.smoother = detail::smoother_from(a.smoother);
  cfg.boundary = detail::boundary_from(a.boundary);
  cfg.interfacial_polar = a.interfacial_polar;
  const rezone::SweepPlan plan = rezone::make_plan(mesh, cfg);
  if (!a.out.empty()) {
    make_dir(a.out);
    io::write_mesh(numbered(a.out, "mesh_", 0, ".txt"), mesh);
  }
  std::vector<Vec2> pos = mesh.nodes;
  Mesh cur = mesh;
  for (int it = 1; it <= a.sweeps; ++it) {
    const std::vector<Vec2> next = rezone::sweep(mesh, pos, plan, cfg.boundary);
    double moved = 0.0;
    for (std::size_t p = 0; p < pos.size(); ++p) moved = std::max(moved, norm(next[p] - pos[p]));
    pos = next;
    const ValidationReport rep = validate(mesh, pos);
    std::printf("sweep %4d  max displacement %.3e  %s\n", it, moved, rep.ok() ? "valid" : "INVALID");
    if (!a.out.empty() && (it % a.every == 0 || it == a.sweeps)) {
      cur.nodes = pos;
      io::write_mesh(numbered(a.out, "mesh_", it, ".txt"), cur);
    }
  }
  return ok;
}

struct MeshArgs {
  std::string source = "polar", case_name = "sedov", out;
  int n_theta = 16, n_r = 10;
  double scale = 1.0;
  Geometry geometry = Geometry::axisymmetric;
};

int do_mesh(const MeshArgs& a) {
  Mesh m;
  if (a.source == "polar") {
    const std::vector<double> radii = uniform_radii(a.n_r, 1.0);
    m = make_polar_mesh(a.n_theta, radii, 0.0, std::numbers::pi / 2, a.geometry);
  } else if (a.source == "mixed") {
    m = make_mixed_mesh(MixedGridParams{}, a.geometry);
  } else if (a.source == "case") {
    m = cases::make_case(a.case_name, {}, a.scale).mesh;
  } else {
    throw Error(ErrorKind::config, "unknown mesh source '" + a.source + "'");
  }
  io::write_mesh(a.out, m);
  std::printf("%zu nodes, %zu cells written to %s\n", m.num_nodes(), m.num_cells(), a.out.c_str());
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-material axisymmetric cell-centered ALE with moment-of-fluid interfaces"};
  app.require_subcommand(1);

  RunArgs ra;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a test problem");
  run_cmd->add_option("config", ra.config, "INI configuration file")->check(CLI::ExistingFile);
  run_cmd->add_option("--case", ra.case_name, "Problem preset")
      ->check(CLI::IsMember({"sedov", "triple_point", "shock_bubble", "implosion"}));
  run_cmd->add_option("--mode", ra.mode, "Mesh motion")->check(CLI::IsMember({"lagrangian", "eulerian", "ale"}));
  run_cmd->add_option("--scale", ra.scale, "Resolution factor applied to the preset grid")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", ra.out, "Output directory");
  run_cmd->add_option("--until", ra.until, "End time (overrides the preset)")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--every", ra.every, "Cycles between snapshots")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--progress", ra.progress, "Cycles between progress lines (0 silences them)");

  MofArgs ma;
  CLI::App* mof_cmd = app.add_subcommand("mof-static", "Static moment-of-fluid reconstructions in the unit square");
  mof_cmd->add_option("--layout", ma.layout, "filament, t-junction, y-junction or all");
  mof_cmd->add_option("--chi", ma.chi, "Curvature radius of the material arcs")->check(CLI::PositiveNumber);
  mof_cmd->add_option("--segments", ma.segments, "Segments per arc (0: chords for chi >= 64, else 200)")
      ->check(CLI::NonNegativeNumber);
  mof_cmd->add_option("--geometry", ma.geometry, "Moment measure")->transform(CLI::CheckedTransformer(geometries));
  mof_cmd->add_option("--centroid", ma.centroid, "Centroid definition")->transform(CLI::CheckedTransformer(centroid_modes));
  mof_cmd->add_option("--circle-levels", ma.circle_levels, "Grids in the circle refinement study (0 skips it)");
  mof_cmd->add_option("--out", ma.out, "CSV of true and reconstructed polygons");

  RezoneArgs za;
  CLI::App* rz_cmd = app.add_subcommand("rezone-static", "Repeated smoothing sweeps on a mesh dump");
  rz_cmd->add_option("mesh", za.mesh, "Mesh dump")->required()->check(CLI::ExistingFile);
  rz_cmd->add_option("--sweeps", za.sweeps, "Number of sweeps")->check(CLI::NonNegativeNumber);
  rz_cmd->add_option("--smoother", za.smoother, "cns or gcns")->check(CLI::IsMember({"cns", "gcns"}));
  rz_cmd->add_option("--boundary", za.boundary, "off, straight or bezier")
      ->check(CLI::IsMember({"off", "straight", "bezier"}));
  rz_cmd->add_flag("--interfacial-polar", za.interfacial_polar, "Treat Cartesian-polar interface nodes as polar");
  rz_cmd->add_option("--out", za.out, "Directory for the per-sweep mesh dumps");
  rz_cmd->add_option("--every", za.every, "Sweeps between dumps")->check(CLI::PositiveNumber);

  MeshArgs ga;
  CLI::App* mesh_cmd = app.add_subcommand("mesh", "Write a generated mesh dump");
  mesh_cmd->add_option("source", ga.source, "polar, mixed or case")->check(CLI::IsMember({"polar", "mixed", "case"}));
  mesh_cmd->add_option("--out", ga.out, "Output file")->required();
  mesh_cmd->add_option("--n-theta", ga.n_theta, "Angular cells of the polar grid")->check(CLI::PositiveNumber);
  mesh_cmd->add_option("--n-r", ga.n_r, "Radial cells of the polar grid")->check(CLI::PositiveNumber);
  mesh_cmd->add_option("--case", ga.case_name, "Preset whose initial mesh is written");
  mesh_cmd->add_option("--scale", ga.scale, "Preset resolution factor")->check(CLI::PositiveNumber);
  mesh_cmd->add_option("--geometry", ga.geometry, "Geometry tag")->transform(CLI::CheckedTransformer(geometries));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return do_run(ra);
    if (*mof_cmd) return do_mof(ma);
    if (*rz_cmd) return do_rezone(za);
    if (*mesh_cmd) return do_mesh(ga);
  } catch (const RunError& e) {
    std::fprintf(stderr, "run failed in phase %s, kind %s, id %ld, t = %g\n  %s\n", e.phase().c_str(),
                 to_string(e.kind()), e.index(), e.time(), e.what());
    return run_failed;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return bad_input;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return bad_input;
  }
  return ok;
}
