#ifndef CCALE_DRIVER_HPP
#define CCALE_DRIVER_HPP

// The run loop: Lagrangian step, then (ALE or Eulerian) interface reconstruction, rezoning and
// remapping, with snapshots and a conservation log.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ccale/cases.hpp"
#include "ccale/config.hpp"
#include "ccale/error.hpp"
#include "ccale/lagrange.hpp"
#include "ccale/mesh_io.hpp"
#include "ccale/output.hpp"
#include "ccale/remap.hpp"
#include "ccale/rezone.hpp"

namespace ccale {

/// A fatal error tagged with the phase that raised it.
class RunError : public std::runtime_error {
 public:
  RunError(std::string phase, const Error& e, double t, long cycle)
      : std::runtime_error("phase " + phase + " at cycle " + std::to_string(cycle) + " (t = " + fmt(t) + "): " + e.what()),
        phase_(std::move(phase)),
        kind_(e.kind()),
        index_(e.index()),
        t_(t) {}

  const std::string& phase() const noexcept { return phase_; }
  ErrorKind kind() const noexcept { return kind_; }
  long index() const noexcept { return index_; }
  double time() const noexcept { return t_; }

 private:
  static std::string fmt(double t) {
    std::ostringstream os;
    os << std::setprecision(6) << t;
    return os.str();
  }
  std::string phase_;
  ErrorKind kind_;
  long index_;
  double t_;
};

/// Limits each node's rezone displacement to `cap` times its shortest incident edge.
inline void cap_displacement(const Mesh& mesh, std::span<const Vec2> from, std::vector<Vec2>& to, double cap) {
  std::vector<double> h(mesh.num_nodes(), std::numeric_limits<double>::infinity());
  for (const auto& pc : mesh.cells)
    for (std::size_t i = 0; i < pc.size(); ++i) {
      const int a = pc[i], b = pc[(i + 1) % pc.size()];
      const double e = norm(from[b] - from[a]);
      h[a] = std::min(h[a], e);
      h[b] = std::min(h[b], e);
    }
  for (std::size_t p = 0; p < to.size(); ++p) {
    const Vec2 d = to[p] - from[p];
    const double len = norm(d);
    const double lim = cap * h[p];
    if (len > lim) to[p] = from[p] + d * (lim / len);
  }
}

class Simulation {
 public:
  explicit Simulation(const RunConfig& cfg) : Simulation(cases::make_case(cfg.case_name, cfg.params, cfg.scale), cfg) {}

  Simulation(cases::Case cs, RunConfig cfg) : case_(std::move(cs)), cfg_(std::move(cfg)) {
    cfg_.validate();
    t_end_ = cfg_.until >= 0.0 ? cfg_.until : case_.t_end;
    initial_nodes_ = case_.mesh.nodes;
    node_velocity_.assign(case_.mesh.num_nodes(), {});
    mass0_ = case_.state.total_mass();
    energy0_ = case_.state.total_energy();
    log_.mass = mass0_;
    log_.energy = energy0_;
  }

  const Mesh& mesh() const { return case_.mesh; }
  const HydroState& state() const { return case_.state; }
  const cases::Case& problem() const { return case_; }
  const RunConfig& config() const { return cfg_; }
  double time() const { return t_; }
  double end_time() const { return t_end_; }
  long cycle() const { return cycle_; }
  bool finished() const { return t_ >= t_end_ * (1.0 - 1e-14) || cycle_ >= cfg_.max_cycles; }
  const std::vector<Vec2>& node_velocity() const { return node_velocity_; }
  const std::vector<Vec2>& initial_nodes() const { return initial_nodes_; }
  const io::LogRow& last_log() const { return log_; }
  const lagrange::StepDiagnostics& last_step() const { return step_diag_; }
  double boundary_work() const { return work_; }
  double max_remap_delta() const { return max_remap_delta_; }

  /// Relative drift of total energy corrected for the work done by the boundary.
  double energy_drift() const {
    return std::abs(case_.state.total_energy() - energy0_ - work_) / std::abs(energy0_);
  }
  double mass_drift() const { return std::abs(case_.state.total_mass() - mass0_) / std::abs(mass0_); }

  /// Material polygons at the current positions (empty entries for pure cells).
  std::vector<std::vector<Polygon>> interfaces() const {
    return remap::reconstruct_interfaces(case_.mesh, case_.mesh.nodes, case_.state, cfg_.mof_mode);
  }

  /// One full cycle. `stop_at` clips the step so outputs land on exact times.
  void advance(double stop_at = std::numeric_limits<double>::infinity()) {
    Mesh& mesh = case_.mesh;
    HydroState& st = case_.state;
    const double t0 = t_;

    lagrange::NodalSolution ns;
    double dt = 0.0;
    const std::vector<Vec2> before = mesh.nodes;
    phase("lagrange", [&] {
      ns = lagrange::solve_nodes(mesh, st, case_.drive, t_);
      dt = lagrange::compute_dt(mesh, st, ns.velocity, cfg_.lagrange, dt_prev_, t_end_);
      dt = std::min({dt, t_end_ - t_, std::max(stop_at - t_, 0.0)});
      if (!(dt > 0.0)) throw Error(ErrorKind::stagnation, "no time left to advance");
      step_diag_ = lagrange::apply_step(mesh, st, ns, dt);
    });
    node_velocity_ = ns.velocity;
    work_ += step_diag_.boundary_work;
    t_ = t0 + dt;
    // A step clipped by an output time should not throttle the next one.
    if (dt < stop_at - t0 || dt_prev_ <= 0.0) dt_prev_ = dt;
    ++cycle_;

    io::LogRow row;
    row.cycle = cycle_;
    row.t = t_;
    row.dt = dt;
    for (int c = 0; c < static_cast<int>(st.num_cells()); ++c) row.mixed += st.is_mixed(c) ? 1 : 0;

    if (cfg_.mode != Mode::lagrangian) {
      const std::vector<Vec2> lag = mesh.nodes;
      std::vector<Vec2> target;
      phase("rezone", [&] {
        if (cfg_.mode == Mode::eulerian) {
          target = initial_nodes_;
        } else {
          const std::vector<Vec2> rz = rezone::rezone_positions(mesh, lag, cfg_.rezone);
          const std::vector<double> w = rezone::relaxation_weights(mesh, before, lag, cfg_.rezone);
          target = rezone::relax(lag, rz, w);
          cap_displacement(mesh, lag, target, cfg_.displacement_cap);
          // A relaxed mesh that folds is dropped in favour of the Lagrangian one.
          if (!validate(mesh, target).ok()) target = lag;
        }
      });
      if (target != lag) {
        phase("remap", [&] {
          std::vector<std::vector<Polygon>> pieces;
          if (row.mixed > 0) pieces = remap::reconstruct_interfaces(mesh, lag, st, cfg_.mof_mode);
          remap::Result r = remap::hybrid_remap(mesh, lag, target, st, pieces, cfg_.remap);
          const remap::Diagnostics& d = r.diagnostics;
          row.remap_mass = d.mass_delta();
          row.remap_energy = d.energy_delta();
          double scale = 0.0;
          for (const auto& c : st.cells) scale += c.mass / c.rbar() * norm(c.velocity);
          row.remap_momentum = scale > 0.0 ? d.momentum_delta(scale) : 0.0;
          row.coverage = d.max_coverage_error;
          row.pcsf = d.pcsf_cells;
          row.mcib = d.mcib_cells;
          max_remap_delta_ = std::max({max_remap_delta_, row.remap_mass, row.remap_energy, row.remap_momentum});
          st = std::move(r.state);
          mesh.nodes = target;
        });
      }
    }

    row.mass = st.total_mass();
    row.energy = st.total_energy();
    row.boundary_work = work_;
    row.mass_drift = mass_drift();
    row.energy_drift = energy_drift();
    log_ = row;
  }

 private:
  template <class F>
  void phase(const char* name, F&& f) {
    try {
      f();
    } catch (const Error& e) {
      throw RunError(name, e, t_, cycle_);
    }
  }

  cases::Case case_;
  RunConfig cfg_;
  double t_ = 0.0, t_end_ = 0.0, dt_prev_ = -1.0;
  long cycle_ = 0;
  std::vector<Vec2> initial_nodes_;
  std::vector<Vec2> node_velocity_;
  double mass0_ = 0.0, energy0_ = 0.0, work_ = 0.0, max_remap_delta_ = 0.0;
  lagrange::StepDiagnostics step_diag_;
  io::LogRow log_;
};

/// Writes the snapshot set for the current state: VTK, radial profile and interface polygons.
inline void write_snapshot(const Simulation& sim, const std::string& dir, int index) {
  std::ostringstream tag;
  tag << std::setw(5) << std::setfill('0') << index;
  const auto& mesh = sim.mesh();
  const auto& st = sim.state();
  const std::vector<double> sch = cases::schlieren(mesh, st, sim.config().schlieren_k);
  io::write_vtk(dir + "/snapshot_" + tag.str() + ".vtk", mesh, st, sim.problem().material_names, sch,
                sim.node_velocity());
  {
    std::ofstream os = io::open_out(dir + "/profile_" + tag.str() + ".csv");
    const auto pts = cases::radial_profile(mesh, st);
    io::write_profile_csv(os, pts);
  }
  {
    std::ofstream os = io::open_out(dir + "/interfaces_" + tag.str() + ".csv");
    const auto pieces = sim.interfaces();
    io::write_interfaces_csv(os, pieces);
  }
}

struct RunSummary {
  long cycles = 0;
  double t = 0.0;
  double mass_drift = 0.0, energy_drift = 0.0, max_remap_delta = 0.0;
  int snapshots = 0;
};

/// Full run with artifacts under cfg.out_dir (skipped when empty). The observer, if set, sees
/// the simulation after every cycle.
inline RunSummary run(const RunConfig& cfg, const std::function<void(const Simulation&)>& observer = {}) {
  Simulation sim(cfg);
  const bool write = !cfg.out_dir.empty();
  std::ofstream log;
  int snap = 0;
  if (write) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create output directory '" + cfg.out_dir + "'");
    {
      std::ofstream os = io::open_out(cfg.out_dir + "/config.ini");
      os << to_ini(cfg);
    }
    io::write_mesh(cfg.out_dir + "/mesh_initial.txt", sim.mesh());
    log = io::open_out(cfg.out_dir + "/conservation.csv");
    log << io::log_header();
    write_snapshot(sim, cfg.out_dir, snap++);
  }
  double next_out = cfg.output_dt > 0.0 ? cfg.output_dt : std::numeric_limits<double>::infinity();
  while (!sim.finished()) {
    sim.advance(next_out);
    if (write) io::write_log_row(log, sim.last_log());
    if (observer) observer(sim);
    bool out = false;
    if (cfg.output_dt > 0.0 && sim.time() >= next_out * (1.0 - 1e-14)) {
      out = true;
      while (next_out <= sim.time() * (1.0 + 1e-14)) next_out += cfg.output_dt;
    }
    if (cfg.output_every > 0 && sim.cycle() % cfg.output_every == 0) out = true;
    if (write && out && !sim.finished()) write_snapshot(sim, cfg.out_dir, snap++);
  }
  if (write) {
    write_snapshot(sim, cfg.out_dir, snap++);
    io::write_mesh(cfg.out_dir + "/mesh_final.txt", sim.mesh());
  }
  return {sim.cycle(), sim.time(), sim.mass_drift(), sim.energy_drift(), sim.max_remap_delta(), snap};
}

}  // namespace ccale

#endif  // CCALE_DRIVER_HPP
