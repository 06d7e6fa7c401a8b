#ifndef CCALE_REMAP_HPP
#define CCALE_REMAP_HPP

// Conservative remap from the Lagrangian grid to the rezoned grid.
//
// Every material of every cell is carried in integral form: R-weighted volume, mass and
// total energy, plus planar area, planar mass and planar momentum. The velocity is rebuilt
// from the planar pair, matching the planar momentum update of the Lagrangian phase.
// Pure regions use swept faces; cells near interfaces use exact intersections.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "ccale/error.hpp"
#include "ccale/mesh.hpp"
#include "ccale/mof.hpp"
#include "ccale/polygon.hpp"
#include "ccale/state.hpp"
#include "ccale/vec2.hpp"

namespace ccale::remap {

struct Options {
  bool limiter = true;
  bool hybrid = true;                // false: every cell by intersection
  double coverage_tolerance = 1e-8;  // relative, per target cell
  double min_fraction = 1e-9;        // smaller remapped fractions are merged into the dominant material
};

// Conserved quantities. The first two are R-weighted, the last three planar.
enum Quantity : int { q_rho = 0, q_energy, q_rho_planar, q_mom_x, q_mom_y, q_count };

constexpr bool is_planar(int q) { return q >= q_rho_planar; }

/// One material of one cell in integral form.
struct Integrals {
  double volume = 0.0;  // integral of R dA
  double area = 0.0;    // integral of dA
  Vec2 first;           // integral of R X dA
  std::array<double, q_count> q{};

  bool present() const { return volume > 0.0 && q[q_rho] > 0.0; }
  Integrals& operator+=(const Integrals& o) {
    volume += o.volume;
    area += o.area;
    first += o.first;
    for (int i = 0; i < q_count; ++i) q[i] += o.q[i];
    return *this;
  }
};

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

struct Classification {
  std::vector<std::uint8_t> interface_cell;  // mixed, or touching a pure cell of another material
  std::vector<std::uint8_t> mixed_node;      // N^M: nodes of interface cells
  std::vector<std::uint8_t> mcib_cell;       // C^M: interface cells and their node neighbors
  std::vector<std::uint8_t> pcsf_cell;       // C^P: cells with at least one pure node

  std::size_t count_mcib() const { return std::count(mcib_cell.begin(), mcib_cell.end(), 1); }
  std::size_t count_pcsf() const { return std::count(pcsf_cell.begin(), pcsf_cell.end(), 1); }
};

/// Material signature: the single material of a pure cell, -1 for a mixed cell.
inline int cell_signature(const HydroState& st, int c) {
  return st.is_mixed(c) ? -1 : st.dominant_material(c);
}

inline Classification classify(const Mesh& mesh, const HydroState& st, bool hybrid = true) {
  const int nc = static_cast<int>(mesh.num_cells());
  Classification cl;
  cl.interface_cell.assign(nc, 0);
  cl.mixed_node.assign(mesh.num_nodes(), hybrid ? 0 : 1);
  cl.mcib_cell.assign(nc, hybrid ? 0 : 1);
  cl.pcsf_cell.assign(nc, 0);
  if (!hybrid) return cl;
  for (int c = 0; c < nc; ++c) {
    // A pure cell is an interface cell when a pure neighbor holds another material, so that every
    // cell around a pure node carries the same single material.
    const int s = cell_signature(st, c);
    bool iface = s < 0;
    for (int d : mesh.cell_stencil[c]) {
      const int sd = cell_signature(st, d);
      iface = iface || (sd >= 0 && sd != s);
    }
    cl.interface_cell[c] = iface ? 1 : 0;
  }
  for (int c = 0; c < nc; ++c) {
    if (!cl.interface_cell[c]) continue;
    for (int p : mesh.cells[c]) cl.mixed_node[p] = 1;
    for (int d : mesh.cell_stencil[c]) cl.mcib_cell[d] = 1;
  }
  for (int c = 0; c < nc; ++c)
    for (int p : mesh.cells[c])
      if (!cl.mixed_node[p]) cl.pcsf_cell[c] = 1;
  return cl;
}

// ---------------------------------------------------------------------------
// Donor reconstructions
// ---------------------------------------------------------------------------

/// Linear reconstruction of one material of one cell.
struct Donor {
  bool present = false;
  Polygon piece;
  BoundingBox box;
  Vec2 center;        // R-weighted centroid of the piece
  Vec2 center_planar;
  std::array<double, q_count> value{};
  std::array<Vec2, q_count> grad{};

  Vec2 center_of(int q) const { return is_planar(q) ? center_planar : center; }
};

/// Integrals of the linear reconstruction over a region with moments `m`.
inline Integrals integrate(const Donor& d, const PolygonMoments& m, Geometry g) {
  Integrals out;
  out.volume = m.volume(g);
  out.area = m.area();
  out.first = m.first(g);
  for (int i = 0; i < q_count; ++i) {
    const Geometry gi = is_planar(i) ? Geometry::planar : g;
    out.q[i] = m.integrate_linear(gi, d.value[i], d.grad[i], d.center_of(i));
  }
  return out;
}

/// Unweighted least squares fit about the cell's own centroid; zero when rank deficient.
inline Vec2 least_squares_gradient(Vec2 x0, double v0, std::span<const Vec2> xs, std::span<const double> vs) {
  double a = 0.0, b = 0.0, d = 0.0;
  Vec2 rhs;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Vec2 dx = xs[i] - x0;
    a += dx.x * dx.x;
    b += dx.x * dx.y;
    d += dx.y * dx.y;
    rhs += dx * (vs[i] - v0);
  }
  const double det = a * d - b * b;
  if (!(det > 1e-12 * (a + d) * (a + d))) return {};
  return {(d * rhs.x - b * rhs.y) / det, (a * rhs.y - b * rhs.x) / det};
}

/// Barth-Jespersen factor keeping the reconstruction at the piece vertices within [lo, hi].
inline double barth_jespersen(std::span<const Vec2> piece, Vec2 center, double v0, Vec2 grad, double lo, double hi) {
  double phi = 1.0;
  for (const auto& x : piece) {
    const double dv = dot(grad, x - center);
    if (dv > 0.0) phi = std::min(phi, (hi - v0) / dv);
    else if (dv < 0.0) phi = std::min(phi, (lo - v0) / dv);
  }
  return std::clamp(phi, 0.0, 1.0);
}

namespace detail {

/// Reconstructed specific internal energy at x with gradients scaled by theta.
inline double internal_energy(const Donor& d, Vec2 x, double theta, double* rho = nullptr, double* rho_pl = nullptr) {
  std::array<double, q_count> v;
  for (int q = 0; q < q_count; ++q)
    v[q] = d.value[q] + (theta == 0.0 ? 0.0 : theta * dot(d.grad[q], x - d.center_of(q)));
  if (rho) *rho = v[q_rho];
  if (rho_pl) *rho_pl = v[q_rho_planar];
  const Vec2 u = Vec2{v[q_mom_x], v[q_mom_y]} / v[q_rho_planar];
  return v[q_energy] / v[q_rho] - 0.5 * norm2(u);
}

inline bool admissible(const Donor& d, Vec2 x, double theta, double floor) {
  double rho = 0.0, rho_pl = 0.0;
  const double e = internal_energy(d, x, theta, &rho, &rho_pl);
  return rho > 0.0 && rho_pl > 0.0 && e >= floor;
}

}  // namespace detail

/// Donors for every cell and material from integral data and material polygons.
inline std::vector<Donor> build_donors(const Mesh& mesh, std::span<const Integrals> data,
                                       std::span<const Polygon> pieces, std::size_t nmat, bool limiter) {
  const int nc = static_cast<int>(mesh.num_cells());
  const Geometry g = mesh.geometry;
  std::vector<Donor> donors(data.size());
  for (int c = 0; c < nc; ++c)
    for (std::size_t k = 0; k < nmat; ++k) {
      const std::size_t i = c * nmat + k;
      const Integrals& in = data[i];
      Donor& d = donors[i];
      if (!in.present() || pieces[i].size() < 3) continue;
      const PolygonMoments pm = polygon_moments(pieces[i]);
      const double vol = pm.volume(g), area = pm.area();
      if (!(vol > 0.0) || !(area > 0.0)) continue;
      d.present = true;
      d.piece = pieces[i];
      d.box = bounding_box(d.piece);
      d.center = pm.centroid(g);
      d.center_planar = pm.planar_centroid();
      // Means over the actual polygon, so the reconstruction integrates back to the totals.
      for (int q = 0; q < q_count; ++q) d.value[q] = in.q[q] / (is_planar(q) ? area : vol);
    }

  std::vector<Vec2> xs;
  std::vector<double> vs;
  for (int c = 0; c < nc; ++c)
    for (std::size_t k = 0; k < nmat; ++k) {
      Donor& d = donors[c * nmat + k];
      if (!d.present) continue;
      for (int q = 0; q < q_count; ++q) {
        xs.clear();
        vs.clear();
        double lo = d.value[q], hi = d.value[q];
        for (int e : mesh.cell_stencil[c]) {
          const Donor& n = donors[e * nmat + k];
          if (e == c || !n.present) continue;
          xs.push_back(n.center_of(q));
          vs.push_back(n.value[q]);
          lo = std::min(lo, n.value[q]);
          hi = std::max(hi, n.value[q]);
        }
        Vec2 gq = least_squares_gradient(d.center_of(q), d.value[q], xs, vs);
        if (limiter) gq *= barth_jespersen(d.piece, d.center_of(q), d.value[q], gq, lo, hi);
        d.grad[q] = gq;
      }
    }
  if (!limiter) return donors;

  // Admissibility: all gradients of a donor are scaled together so that every piece vertex has
  // positive densities and an internal energy of at least half the smallest stencil mean.
  std::vector<double> mean_e(donors.size(), 0.0);
  for (std::size_t i = 0; i < donors.size(); ++i)
    if (donors[i].present) mean_e[i] = detail::internal_energy(donors[i], {}, 0.0);
  for (int c = 0; c < nc; ++c)
    for (std::size_t k = 0; k < nmat; ++k) {
      Donor& d = donors[c * nmat + k];
      if (!d.present) continue;
      double floor = mean_e[c * nmat + k];
      for (int e : mesh.cell_stencil[c])
        if (donors[e * nmat + k].present) floor = std::min(floor, mean_e[e * nmat + k]);
      floor *= 0.5;
      double theta = 1.0;
      for (const auto& x : d.piece) {
        if (detail::admissible(d, x, theta, floor)) continue;
        double a = 0.0, b = theta;
        for (int it = 0; it < 40; ++it) {
          const double m = 0.5 * (a + b);
          (detail::admissible(d, x, m, floor) ? a : b) = m;
        }
        theta = a;
      }
      if (theta < 1.0)
        for (auto& g : d.grad) g *= theta;
    }
  return donors;
}

// ---------------------------------------------------------------------------
// Swept faces
// ---------------------------------------------------------------------------

namespace detail {

inline Vec2 segment_intersection(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const Vec2 r = b - a, s = d - c;
  const double t = cross(c - a, s) / cross(r, s);
  return a + r * t;
}

}  // namespace detail

/// Signed regions swept by the face p->q of a cell: the quad {X_p, X~_p, X~_q, X_q}, split at the
/// crossing point when old and new faces cross (bow tie). Positive area lies outside the cell.
inline std::vector<Polygon> swept_regions(Vec2 xp, Vec2 xq, Vec2 yp, Vec2 yq, bool canonical_pq, long cell = -1) {
  if (ccale::detail::segments_cross(xp, yp, yq, xq))
    throw Error(ErrorKind::coverage, "twisted swept face; rezone displacement too large", cell);
  if (!ccale::detail::segments_cross(xp, xq, yp, yq)) return {{xp, yp, yq, xq}};
  // Faces that slide along their own line (the axis, straight walls) cross only through rounding.
  if (std::abs(cross(xq - xp, yq - yp)) <= 1e-12 * norm(xq - xp) * norm(yq - yp)) return {{xp, yp, yq, xq}};
  // Same crossing point seen from both sides of the face.
  const Vec2 i = canonical_pq ? detail::segment_intersection(xp, xq, yp, yq) : detail::segment_intersection(xq, xp, yq, yp);
  return {{xp, yp, i}, {i, yq, xq}};
}

/// Swept-face update of a single-material cell from `from` to `to` positions.
inline Integrals pcsf_cell(const Mesh& mesh, int c, int k, std::span<const Vec2> from, std::span<const Vec2> to,
                           const Integrals& own, std::span<const Donor> donors, std::size_t nmat) {
  const Geometry g = mesh.geometry;
  Integrals out = own;
  const auto& pc = mesh.cells[c];
  const std::size_t n = pc.size();
  for (std::size_t i = 0; i < n; ++i) {
    const int p = pc[i], q = pc[(i + 1) % n];
    if (from[p] == to[p] && from[q] == to[q]) continue;
    const int nb = mesh.face_neighbor[c][i];
    for (const auto& region : swept_regions(from[p], from[q], to[p], to[q], p < q, c)) {
      const PolygonMoments m = polygon_moments(region);
      if (m.area() == 0.0) continue;
      const int donor_cell = (m.area() > 0.0 && nb >= 0) ? nb : c;
      const Donor& d = donors[donor_cell * nmat + k];
      if (!d.present) throw Error(ErrorKind::coverage, "swept face draws from a cell without the material", c);
      out += integrate(d, m, g);
    }
  }
  const PolygonMoments cm = polygon_moments(mesh.cell_polygon(c, to));
  out.volume = cm.volume(g);
  out.area = cm.area();
  out.first = cm.first(g);
  return out;
}

// ---------------------------------------------------------------------------
// Exact intersections
// ---------------------------------------------------------------------------

/// Intersection update of cell c: every donor material polygon of the stencil is clipped against
/// the triangles of the rezoned cell. Returns the per-material integrals and the covered area.
inline std::vector<Integrals> mcib_cell(const Mesh& mesh, int c, std::span<const Vec2> to,
                                        std::span<const Donor> donors, std::size_t nmat, double* covered = nullptr) {
  const Geometry g = mesh.geometry;
  const Polygon target = mesh.cell_polygon(c, to);
  const BoundingBox tbox = bounding_box(target);
  const auto tris = triangulate(target);
  std::vector<Integrals> out(nmat);
  double area = 0.0;
  for (int d : mesh.cell_stencil[c])
    for (std::size_t k = 0; k < nmat; ++k) {
      const Donor& dn = donors[d * nmat + k];
      if (!dn.present || !dn.box.overlaps(tbox)) continue;
      PolygonMoments m;
      for (const auto& t : tris) m += polygon_moments(clip_convex(dn.piece, t));
      if (m.area() == 0.0) continue;
      out[k] += integrate(dn, m, g);
      area += m.area();
    }
  if (covered) *covered = area;
  return out;
}

// ---------------------------------------------------------------------------
// Hybrid driver
// ---------------------------------------------------------------------------

struct Totals {
  double mass = 0.0;
  double energy = 0.0;
  Vec2 momentum;  // planar bookkeeping momentum
};

struct Diagnostics {
  Totals before, after;
  std::size_t pcsf_cells = 0, mcib_cells = 0, merged_fractions = 0;
  double max_coverage_error = 0.0;

  double mass_delta() const { return std::abs(after.mass - before.mass) / std::abs(before.mass); }
  double energy_delta() const { return std::abs(after.energy - before.energy) / std::abs(before.energy); }
  double momentum_delta(double scale) const { return norm(after.momentum - before.momentum) / scale; }
};

inline Totals totals_of(std::span<const Integrals> data) {
  Totals t;
  for (const auto& in : data) {
    t.mass += in.q[q_rho];
    t.energy += in.q[q_energy];
    t.momentum += Vec2{in.q[q_mom_x], in.q[q_mom_y]};
  }
  return t;
}

/// Material polygons of every cell: MOF pieces for mixed cells, the cell itself otherwise.
/// `mixed_pieces[c]` must hold one polygon per material for every mixed cell.
inline std::vector<Polygon> material_pieces(const Mesh& mesh, std::span<const Vec2> pos, const HydroState& st,
                                            std::span<const std::vector<Polygon>> mixed_pieces) {
  const std::size_t nmat = st.num_materials();
  std::vector<Polygon> pieces(mesh.num_cells() * nmat);
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    if (st.is_mixed(c)) {
      if (mixed_pieces.size() <= static_cast<std::size_t>(c) || mixed_pieces[c].size() != nmat)
        throw Error(ErrorKind::out_of_range, "mixed cell without an interface reconstruction", c);
      for (std::size_t k = 0; k < nmat; ++k)
        if (st.mats(c)[k].present()) pieces[c * nmat + k] = mixed_pieces[c][k];
    } else {
      pieces[c * nmat + st.dominant_material(c)] = mesh.cell_polygon(c, pos);
    }
  }
  return pieces;
}

/// Integral form of a Lagrangian state. Material volumes, areas and first moments come from the
/// material polygons; masses and energies from the state.
inline std::vector<Integrals> integrals_of(const Mesh& mesh, const HydroState& st, std::span<const Polygon> pieces) {
  const std::size_t nmat = st.num_materials();
  const Geometry g = mesh.geometry;
  std::vector<Integrals> out(mesh.num_cells() * nmat);
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const Vec2 u = st.cells[c].velocity;
    const auto ms = st.mats(c);
    for (std::size_t k = 0; k < nmat; ++k) {
      const MaterialState& m = ms[k];
      if (!m.present()) continue;
      const PolygonMoments pm = polygon_moments(pieces[c * nmat + k]);
      Integrals& in = out[c * nmat + k];
      in.volume = pm.volume(g);
      in.area = pm.area();
      in.first = pm.first(g);
      const double rho = m.mass / (m.alpha * st.cells[c].volume);
      in.q[q_rho] = m.mass;
      in.q[q_energy] = m.mass * (m.eps + 0.5 * norm2(u));
      in.q[q_rho_planar] = rho * in.area;
      in.q[q_mom_x] = rho * in.area * u.x;
      in.q[q_mom_y] = rho * in.area * u.y;
    }
    // A present material whose polygon came out empty (below the MOF absence threshold) hands
    // its content to the largest material so nothing is lost.
    std::size_t dom = 0;
    for (std::size_t k = 1; k < nmat; ++k)
      if (out[c * nmat + k].volume > out[c * nmat + dom].volume) dom = k;
    for (std::size_t k = 0; k < nmat; ++k) {
      Integrals& in = out[c * nmat + k];
      if (k == dom || in.volume > 0.0 || in.q[q_rho] == 0.0) continue;
      const Integrals moved{0.0, 0.0, {}, in.q};
      out[c * nmat + dom] += moved;
      in = {};
    }
  }
  return out;
}

/// Rebuilds cell c of `st` (already sized, geometry at the rezoned positions) from integrals.
inline std::size_t rebuild_cell(HydroState& st, const Mesh& mesh, int c, std::span<const Vec2> pos,
                                std::span<Integrals> in, double min_fraction) {
  const Geometry g = mesh.geometry;
  const PolygonMoments cm = polygon_moments(mesh.cell_polygon(c, pos));
  CellState& cs = st.cells[c];
  cs.volume = cm.volume(g);
  cs.area = cm.area();
  const std::size_t nmat = in.size();

  // Slivers go to the dominant material; totals are unchanged.
  std::size_t merged = 0;
  std::size_t dom = 0;
  for (std::size_t k = 1; k < nmat; ++k)
    if (in[k].volume > in[dom].volume) dom = k;
  for (std::size_t k = 0; k < nmat; ++k) {
    if (k == dom || (in[k].volume == 0.0 && in[k].q[q_rho] == 0.0)) continue;
    if (in[k].present() && in[k].volume >= min_fraction * cs.volume) continue;
    in[dom] += in[k];
    in[k] = {};
    ++merged;
  }
  if (!in[dom].present()) throw Error(ErrorKind::positivity, "remapped cell has no positive mass", c);

  double mass = 0.0, ke_parts = 0.0;
  Vec2 mom;
  std::vector<double> ke_k(nmat, 0.0);
  for (std::size_t k = 0; k < nmat; ++k) {
    if (!in[k].present()) continue;
    const Vec2 uk = Vec2{in[k].q[q_mom_x], in[k].q[q_mom_y]} / in[k].q[q_rho_planar];
    mass += in[k].q[q_rho];
    mom += uk * in[k].q[q_rho];
    ke_k[k] = 0.5 * norm2(uk);
    ke_parts += in[k].q[q_rho] * ke_k[k];
  }
  cs.velocity = mom / mass;
  // Each material keeps its own kinetic energy out of its internal energy; the excess of the
  // material kinetic energies over the cell one (never negative) is shared per unit mass.
  const double excess = (ke_parts - 0.5 * mass * norm2(cs.velocity)) / mass;
  double vsum = 0.0;
  for (std::size_t k = 0; k < nmat; ++k) vsum += in[k].present() ? in[k].volume : 0.0;
  auto ms = st.mats(c);
  for (std::size_t k = 0; k < nmat; ++k) {
    MaterialState& m = ms[k];
    m = {};
    if (!in[k].present()) continue;
    // Fractions of the covered volume; they sum to one and match the geometry to the coverage tolerance.
    m.alpha = in[k].volume / vsum;
    m.mass = in[k].q[q_rho];
    m.eps = in[k].q[q_energy] / in[k].q[q_rho] - ke_k[k] + excess;
    m.centroid = in[k].first / in[k].volume;
  }
  close_cell_from_materials(st, c);
  return merged;
}

struct Result {
  HydroState state;
  Diagnostics diagnostics;
  Classification classification;
};

/// Hybrid remap: pure nodes move first with swept faces over C^P, then the mixed nodes move and
/// C^M is remapped by intersection using the intermediate state as donors.
inline Result hybrid_remap(const Mesh& mesh, std::span<const Vec2> old_pos, std::span<const Vec2> new_pos,
                           const HydroState& st, std::span<const std::vector<Polygon>> mixed_pieces,
                           const Options& opt = {}) {
  const int nc = static_cast<int>(mesh.num_cells());
  const std::size_t nmat = st.num_materials();
  Result res;
  res.classification = classify(mesh, st, opt.hybrid);
  const Classification& cl = res.classification;

  std::vector<Polygon> pieces = material_pieces(mesh, old_pos, st, mixed_pieces);
  std::vector<Integrals> data = integrals_of(mesh, st, pieces);
  res.diagnostics.before = totals_of(data);

  // Cells whose nodes stay put exchange nothing with their neighbors; they pass through untouched.
  std::vector<std::uint8_t> moved(nc, 0);
  for (int c = 0; c < nc; ++c)
    for (int p : mesh.cells[c])
      if (!(old_pos[p] == new_pos[p])) moved[c] = 1;

  // Step 1: swept faces, pure nodes only.
  std::vector<Vec2> mid(old_pos.begin(), old_pos.end());
  for (std::size_t p = 0; p < mid.size(); ++p)
    if (!cl.mixed_node[p]) mid[p] = new_pos[p];
  if (cl.count_pcsf() > 0) {
    const std::vector<Donor> donors = build_donors(mesh, data, pieces, nmat, opt.limiter);
    std::vector<Integrals> next = data;
    for (int c = 0; c < nc; ++c) {
      if (!cl.pcsf_cell[c] || !moved[c]) continue;
      const int k = st.dominant_material(c);
      next[c * nmat + k] = pcsf_cell(mesh, c, k, old_pos, mid, data[c * nmat + k], donors, nmat);
      pieces[c * nmat + k] = mesh.cell_polygon(c, mid);
      ++res.diagnostics.pcsf_cells;
    }
    data = std::move(next);
  }

  // Step 2: intersections, mixed nodes.
  if (cl.count_mcib() > 0) {
    const std::vector<Donor> donors = build_donors(mesh, data, pieces, nmat, opt.limiter);
    std::vector<Integrals> next = data;
    for (int c = 0; c < nc; ++c) {
      if (!cl.mcib_cell[c] || !moved[c]) continue;
      double covered = 0.0;
      const auto out = mcib_cell(mesh, c, new_pos, donors, nmat, &covered);
      const double area = polygon_moments(mesh.cell_polygon(c, new_pos)).area();
      const double err = std::abs(covered - area) / area;
      res.diagnostics.max_coverage_error = std::max(res.diagnostics.max_coverage_error, err);
      if (err > opt.coverage_tolerance)
        throw Error(ErrorKind::coverage, "rezoned cell not covered by its Lagrangian neighbors", c);
      std::copy(out.begin(), out.end(), next.begin() + c * nmat);
      ++res.diagnostics.mcib_cells;
    }
    data = std::move(next);
  }
  res.diagnostics.after = totals_of(data);

  res.state = st;
  for (int c = 0; c < nc; ++c)
    if (moved[c])
      res.diagnostics.merged_fractions +=
        rebuild_cell(res.state, mesh, c, new_pos, std::span<Integrals>(data.data() + c * nmat, nmat), opt.min_fraction);
  return res;
}

/// Interface polygons of every mixed cell by nested-dissection MOF at the given positions.
inline std::vector<std::vector<Polygon>> reconstruct_interfaces(const Mesh& mesh, std::span<const Vec2> pos,
                                                                const HydroState& st, mof::CentroidMode mode,
                                                                std::size_t* unconverged = nullptr) {
  const std::size_t nmat = st.num_materials();
  std::vector<std::vector<Polygon>> out(mesh.num_cells());
  std::vector<mof::Target> targets(nmat);
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    if (!st.is_mixed(c)) continue;
    const Polygon poly = mesh.cell_polygon(c, pos);
    const double vcell = polygon_moments(poly).volume(mesh.geometry);
    const auto ms = st.mats(c);
    for (std::size_t k = 0; k < nmat; ++k)
      targets[k] = ms[k].present() ? mof::Target{ms[k].alpha * vcell, ms[k].centroid} : mof::Target{};
    mof::Partition part = mof::reconstruct_multi(poly, targets, mesh.geometry, mode);
    if (!part.converged && unconverged) ++*unconverged;
    out[c] = std::move(part.pieces);
  }
  return out;
}

}  // namespace ccale::remap

#endif  // CCALE_REMAP_HPP
