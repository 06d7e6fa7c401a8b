#ifndef CCALE_LAGRANGE_HPP
#define CCALE_LAGRANGE_HPP

// First-order cell-centered Lagrangian step in area-weighted form: nodal solver,
// corner fluxes, forward-Euler update and time-step control.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "ccale/eos.hpp"
#include "ccale/error.hpp"
#include "ccale/mesh.hpp"
#include "ccale/polygon.hpp"
#include "ccale/state.hpp"

namespace ccale::lagrange {

/// External data for piston and pressure boundary faces.
struct BoundaryDrive {
  std::function<double(double)> pressure;  // P*(t) on pressure faces
  Vec2 piston_velocity;                     // prescribed velocity on piston faces
};

struct Options {
  double cfl = 0.25;
  double max_growth = 0.1;   // largest relative volume change per step
  double dt_growth = 1.05;   // dt <= dt_growth * previous dt
};

/// M_pc = Z_c (L- N- (x) N- + L+ N+ (x) N+).
inline Mat2 corner_matrix(const CornerGeometry& g, double impedance) {
  Mat2 m = Mat2::outer(g.n_minus, g.n_minus) * g.len_minus + Mat2::outer(g.n_plus, g.n_plus) * g.len_plus;
  return m * impedance;
}

/// F_pc = L_pc P_c N_pc - M_pc (U_p - U_c).
inline Vec2 corner_flux(const CellState& cell, const CornerGeometry& g, const Mat2& mpc, const Vec2& node_velocity) {
  return g.corner_normal() * cell.pressure - mpc * (node_velocity - cell.velocity);
}

/// Kinematic constraints and external force at a boundary node.
struct NodeConstraint {
  int count = 0;                 // 0: free, 1: normal velocity imposed, 2: velocity fully imposed
  std::array<Vec2, 2> normal{};
  std::array<double, 2> value{};
  Vec2 external_force;           // -sum of L_pb P* N_pb over pressure faces (N_pb outward)
};

inline NodeConstraint node_constraint(const Mesh& mesh, int p, const BoundaryDrive& drive, double t) {
  NodeConstraint nc;
  struct Raw {
    Vec2 n;
    double g;
  };
  std::vector<Raw> raw;
  for (const auto& [c, i] : mesh.boundary_faces_of_node(p)) {
    const auto& pc = mesh.cells[c];
    const Vec2 a = mesh.nodes[pc[i]];
    const Vec2 b = mesh.nodes[pc[(i + 1) % pc.size()]];
    const double len = norm(b - a);
    if (len == 0.0) throw Error(ErrorKind::degenerate_edge, "zero-length boundary face", c);
    const Vec2 n = perp_right(b - a) / len;
    switch (mesh.face_tag[c][i]) {
      case BoundaryTag::wall:
      case BoundaryTag::symmetry:
      case BoundaryTag::none:
        raw.push_back({n, 0.0});
        break;
      case BoundaryTag::piston:
        raw.push_back({n, dot(drive.piston_velocity, n)});
        break;
      case BoundaryTag::pressure: {
        const double ps = drive.pressure ? drive.pressure(t) : 0.0;
        // The outside pushes inward, like a ghost cell whose corner normal is -N.
        nc.external_force -= n * (0.5 * len * ps);
        break;
      }
    }
  }
  // Merge nearly parallel faces (smooth curved walls) into one averaged constraint.
  std::vector<Raw> merged;
  std::vector<int> weight;
  for (const auto& r : raw) {
    bool done = false;
    for (std::size_t k = 0; k < merged.size() && !done; ++k) {
      const Vec2 mn = merged[k].n / norm(merged[k].n);
      if (dot(mn, r.n) > 0.9) {
        merged[k].n += r.n;
        merged[k].g += r.g;
        ++weight[k];
        done = true;
      }
    }
    if (!done) {
      merged.push_back(r);
      weight.push_back(1);
    }
  }
  for (std::size_t k = 0; k < merged.size() && nc.count < 2; ++k) {
    const double l = norm(merged[k].n);
    nc.normal[nc.count] = merged[k].n / l;
    nc.value[nc.count] = merged[k].g / weight[k];
    ++nc.count;
  }
  return nc;
}

/// Solves M U = rhs subject to the node's kinematic constraints.
inline Vec2 solve_constrained(const Mat2& m, const Vec2& rhs, const NodeConstraint& nc, int node = -1) {
  if (nc.count == 0) {
    const double scale = std::max(std::abs(m.a) + std::abs(m.b), std::abs(m.c) + std::abs(m.d));
    if (!(std::abs(m.det()) > 1e-300) || !(std::abs(m.det()) > 1e-14 * scale * scale))
      throw Error(ErrorKind::singular_node, "singular nodal matrix", node);
    return m.inverse() * rhs;
  }
  if (nc.count == 2) {
    const Mat2 a{nc.normal[0].x, nc.normal[0].y, nc.normal[1].x, nc.normal[1].y};
    return a.inverse() * Vec2{nc.value[0], nc.value[1]};
  }
  const Vec2 n = nc.normal[0];
  const Vec2 t{-n.y, n.x};
  const double mtt = dot(t, m * t);
  if (!(mtt > 0.0)) throw Error(ErrorKind::singular_node, "singular tangential nodal system", node);
  const Vec2 base = n * nc.value[0];
  const double s = (dot(t, rhs) - dot(t, m * base)) / mtt;
  return base + t * s;
}

struct NodalSolution {
  std::vector<Vec2> velocity;
  std::vector<Mat2> node_matrix;
  std::vector<Vec2> rhs;
  std::vector<CornerGeometry> corners;  // indexed by mesh.corner_offset[c] + i
  std::vector<Mat2> corner_matrix;
  std::vector<Vec2> flux;
};

inline NodalSolution solve_nodes(const Mesh& mesh, const HydroState& st, const BoundaryDrive& drive, double t) {
  NodalSolution ns;
  const std::size_t nn = mesh.num_nodes();
  const std::size_t ncr = mesh.num_corners();
  ns.velocity.assign(nn, {});
  ns.node_matrix.assign(nn, {});
  ns.rhs.assign(nn, {});
  ns.corners.resize(ncr);
  ns.corner_matrix.resize(ncr);
  ns.flux.resize(ncr);
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const CellState& cs = st.cells[c];
    const auto& pc = mesh.cells[c];
    for (int i = 0; i < static_cast<int>(pc.size()); ++i) {
      const int k = mesh.corner_offset[c] + i;
      ns.corners[k] = corner_geometry_local(mesh, c, i, mesh.nodes);
      ns.corner_matrix[k] = corner_matrix(ns.corners[k], cs.impedance());
      ns.node_matrix[pc[i]] += ns.corner_matrix[k];
      ns.rhs[pc[i]] += ns.corners[k].corner_normal() * cs.pressure + ns.corner_matrix[k] * cs.velocity;
    }
  }
  std::vector<std::uint8_t> boundary(nn, 0);
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c)
    for (std::size_t i = 0; i < mesh.cells[c].size(); ++i)
      if (mesh.face_neighbor[c][i] < 0) {
        boundary[mesh.cells[c][i]] = 1;
        boundary[mesh.cells[c][(i + 1) % mesh.cells[c].size()]] = 1;
      }
  for (int p = 0; p < static_cast<int>(nn); ++p) {
    NodeConstraint nc;
    if (boundary[p]) {
      nc = node_constraint(mesh, p, drive, t);
      ns.rhs[p] += nc.external_force;
    }
    ns.velocity[p] = solve_constrained(ns.node_matrix[p], ns.rhs[p], nc, p);
  }
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const auto& pc = mesh.cells[c];
    for (int i = 0; i < static_cast<int>(pc.size()); ++i) {
      const int k = mesh.corner_offset[c] + i;
      ns.flux[k] = corner_flux(st.cells[c], ns.corners[k], ns.corner_matrix[k], ns.velocity[pc[i]]);
    }
  }
  return ns;
}

/// Divergence consistent with the energy flux: (1/V) sum R_p L_pc N_pc . U_p.
inline double discrete_divergence(const Mesh& mesh, int c, std::span<const Vec2> positions,
                                  std::span<const Vec2> node_velocity) {
  const auto& pc = mesh.cells[c];
  const int n = static_cast<int>(pc.size());
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const CornerGeometry g = corner_geometry_local(mesh, c, i, positions);
    s += pseudo_radius(mesh.geometry, positions[pc[i]].y) * dot(g.corner_normal(), node_velocity[pc[i]]);
  }
  return s / cell_measures(mesh, c, positions).volume;
}

/// Divergence implied by the exact volume rate of change under node motion.
inline double gcl_divergence(const Mesh& mesh, int c, std::span<const Vec2> positions,
                             std::span<const Vec2> node_velocity) {
  const auto& pc = mesh.cells[c];
  const int n = static_cast<int>(pc.size());
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const CornerGeometry g = corner_geometry_local(mesh, c, i, positions);
    const double r = pseudo_radius(mesh.geometry, positions[pc[i]].y);
    const double rm = pseudo_radius(mesh.geometry, positions[pc[(i + n - 1) % n]].y);
    const double rp = pseudo_radius(mesh.geometry, positions[pc[(i + 1) % n]].y);
    const Vec2 w = g.n_minus * ((2.0 * r + rm) * g.len_minus) + g.n_plus * ((2.0 * r + rp) * g.len_plus);
    s += dot(w, node_velocity[pc[i]]) / 3.0;
  }
  return s / cell_measures(mesh, c, positions).volume;
}

inline double shortest_edge(const Mesh& mesh, int c) {
  const auto& pc = mesh.cells[c];
  double e = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pc.size(); ++i)
    e = std::min(e, norm(mesh.nodes[pc[(i + 1) % pc.size()]] - mesh.nodes[pc[i]]));
  return e;
}

/// CFL and volume-variation limited time step. `dt_prev <= 0` disables the growth limit.
inline double compute_dt(const Mesh& mesh, const HydroState& st, std::span<const Vec2> node_velocity,
                         const Options& opt, double dt_prev, double total_time) {
  double dt = std::numeric_limits<double>::infinity();
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const CellState& cs = st.cells[c];
    const double speed = cs.sound + norm(cs.velocity);
    if (speed > 0.0) dt = std::min(dt, opt.cfl * shortest_edge(mesh, c) / speed);
    if (!node_velocity.empty()) {
      const double div = std::abs(gcl_divergence(mesh, c, mesh.nodes, node_velocity));
      if (div > 0.0) dt = std::min(dt, opt.max_growth / div);
    }
  }
  if (dt_prev > 0.0) dt = std::min(dt, opt.dt_growth * dt_prev);
  if (!(dt >= 1e-14 * total_time)) throw Error(ErrorKind::stagnation, "time step underflow");
  return dt;
}

struct StepDiagnostics {
  double boundary_work = 0.0;        // energy entering through the boundary during the step
  double max_gcl_discrepancy = 0.0;  // max_c |div_c - div_c^GCL| at the start of the step
  double max_divergence = 0.0;
  double min_volume = 0.0;
};

/// Forward-Euler update with a precomputed nodal solution. Moves the nodes, recomputes
/// geometry, applies the equal-strain closure and maps material centroids to the new cells.
inline StepDiagnostics apply_step(Mesh& mesh, HydroState& st, const NodalSolution& ns, double dt) {
  StepDiagnostics diag;
  const int ncell = static_cast<int>(mesh.num_cells());
  const std::vector<Vec2> old_nodes = mesh.nodes;

  for (int c = 0; c < ncell; ++c) {
    const double d = discrete_divergence(mesh, c, old_nodes, ns.velocity);
    const double dg = gcl_divergence(mesh, c, old_nodes, ns.velocity);
    diag.max_gcl_discrepancy = std::max(diag.max_gcl_discrepancy, std::abs(d - dg));
    diag.max_divergence = std::max(diag.max_divergence, std::abs(dg));
  }

  std::vector<Vec2> force_sum(mesh.num_nodes());
  std::vector<double> old_ie(ncell);
  for (int c = 0; c < ncell; ++c) {
    CellState& cs = st.cells[c];
    const auto& pc = mesh.cells[c];
    old_ie[c] = cs.mass * cs.internal_energy();
    Vec2 fsum;
    double work = 0.0;
    for (int i = 0; i < static_cast<int>(pc.size()); ++i) {
      const int k = mesh.corner_offset[c] + i;
      const Vec2& f = ns.flux[k];
      const Vec2& up = ns.velocity[pc[i]];
      fsum += f;
      work += dot(f, up) * pseudo_radius(mesh.geometry, old_nodes[pc[i]].y);
      force_sum[pc[i]] += f;
    }
    cs.velocity -= fsum * (dt * cs.rbar() / cs.mass);
    cs.energy -= dt * work / cs.mass;
  }
  for (int p = 0; p < static_cast<int>(mesh.num_nodes()); ++p) {
    if (mesh.is_boundary_node(p))
      diag.boundary_work -= dt * pseudo_radius(mesh.geometry, old_nodes[p].y) * dot(ns.velocity[p], force_sum[p]);
  }

  for (std::size_t p = 0; p < mesh.num_nodes(); ++p) mesh.nodes[p] += ns.velocity[p] * dt;

  diag.min_volume = std::numeric_limits<double>::infinity();
  for (int c = 0; c < ncell; ++c) {
    const Polygon poly = mesh.cell_polygon(c);
    const PolygonMoments pm = polygon_moments(poly);
    if (!(pm.area() > 0.0) || !(pm.volume(mesh.geometry) > 0.0) || is_self_intersecting(poly))
      throw Error(ErrorKind::tangling, "cell inverted during the Lagrangian step", c);
    CellState& cs = st.cells[c];
    cs.area = pm.area();
    cs.volume = pm.volume(mesh.geometry);
    cs.rho = cs.mass / cs.volume;
    diag.min_volume = std::min(diag.min_volume, cs.volume);
    const double ie_new = cs.mass * cs.internal_energy();
    if (ie_new < 0.0) throw Error(ErrorKind::positivity, "negative internal energy after the Lagrangian step", c);
    auto ms = st.mats(c);
    const MixtureClosure mix = equal_strain_update(ms, st.eos, cs.volume, ie_new - old_ie[c], c);
    cs.pressure = mix.pressure;
    cs.sound = mix.sound;

    // Material centroids follow the cell through mean-value coordinates.
    const Polygon old_poly = mesh.cell_polygon(c, old_nodes);
    const Vec2 new_centroid = pm.centroid(mesh.geometry);
    for (auto& m : ms)
      if (m.present()) m.centroid = transport_point(old_poly, poly, m.centroid, new_centroid);
  }
  return diag;
}

/// Nodal solve plus update in one call.
inline StepDiagnostics step(Mesh& mesh, HydroState& st, const BoundaryDrive& drive, double t, double dt) {
  const NodalSolution ns = solve_nodes(mesh, st, drive, t);
  return apply_step(mesh, st, ns, dt);
}

}  // namespace ccale::lagrange

#endif  // CCALE_LAGRANGE_HPP
