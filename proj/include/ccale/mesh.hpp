#ifndef CCALE_MESH_HPP
#define CCALE_MESH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "ccale/error.hpp"
#include "ccale/polygon.hpp"
#include "ccale/vec2.hpp"

namespace ccale {

enum class BoundaryTag : std::uint8_t { none, wall, symmetry, piston, pressure };
enum class RegionTag : std::uint8_t { cartesian, polar };

/// Unstructured polygonal mesh with static connectivity. Only node positions change during a run.
struct Mesh {
  Geometry geometry = Geometry::planar;
  std::vector<Vec2> nodes;
  std::vector<std::vector<int>> cells;                 // counterclockwise vertex lists P(c)
  std::vector<std::vector<int>> node_cells;            // counterclockwise incident cells C(p)
  std::vector<std::vector<int>> face_neighbor;         // per cell edge P[i] -> P[i+1]; -1 on the boundary
  std::vector<std::vector<BoundaryTag>> face_tag;      // BoundaryTag::none for interior faces
  std::vector<RegionTag> region;                       // beta(X_p^0), fixed at initialization
  std::vector<std::uint8_t> interfacial;               // node on the Cartesian/polar frontier
  std::vector<std::vector<int>> cell_stencil;          // cells sharing at least one node with c (c included)
  std::vector<int> corner_offset;                      // first corner index of each cell; back() = corner count

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_cells() const { return cells.size(); }
  std::size_t num_corners() const { return corner_offset.empty() ? 0 : static_cast<std::size_t>(corner_offset.back()); }

  Polygon cell_polygon(int c) const { return cell_polygon(c, nodes); }
  Polygon cell_polygon(int c, std::span<const Vec2> positions) const {
    Polygon poly;
    poly.reserve(cells[c].size());
    for (int p : cells[c]) poly.push_back(positions[p]);
    return poly;
  }

  int local_index(int c, int p) const {
    const auto& pc = cells[c];
    for (std::size_t i = 0; i < pc.size(); ++i)
      if (pc[i] == p) return static_cast<int>(i);
    return -1;
  }

  /// Builds node_cells, face adjacency and stencils from `cells`. Existing face tags are kept
  /// when their shape matches; new boundary faces default to walls.
  void build_topology() {
    const int nc = static_cast<int>(cells.size());
    node_cells.assign(nodes.size(), {});
    for (int c = 0; c < nc; ++c)
      for (int p : cells[c]) node_cells[p].push_back(c);

    std::map<std::pair<int, int>, std::pair<int, int>> edges;
    face_neighbor.assign(nc, {});
    const bool keep_tags = face_tag.size() == cells.size();
    if (!keep_tags) face_tag.assign(nc, {});
    for (int c = 0; c < nc; ++c) {
      const auto& pc = cells[c];
      face_neighbor[c].assign(pc.size(), -1);
      if (!keep_tags || face_tag[c].size() != pc.size()) face_tag[c].assign(pc.size(), BoundaryTag::none);
      for (std::size_t i = 0; i < pc.size(); ++i) {
        const int a = pc[i];
        const int b = pc[(i + 1) % pc.size()];
        const auto key = std::minmax(a, b);
        auto it = edges.find(key);
        if (it == edges.end()) {
          edges.emplace(key, std::make_pair(c, static_cast<int>(i)));
        } else {
          const auto [d, j] = it->second;
          face_neighbor[c][i] = d;
          face_neighbor[d][j] = c;
          face_tag[c][i] = BoundaryTag::none;
          face_tag[d][j] = BoundaryTag::none;
        }
      }
    }
    for (int c = 0; c < nc; ++c)
      for (std::size_t i = 0; i < cells[c].size(); ++i)
        if (face_neighbor[c][i] < 0 && face_tag[c][i] == BoundaryTag::none) face_tag[c][i] = BoundaryTag::wall;

    for (std::size_t p = 0; p < nodes.size(); ++p) {
      auto& list = node_cells[p];
      const Vec2 x = nodes[p];
      std::vector<std::pair<double, int>> keyed;
      for (int c : list) {
        const Vec2 g = polygon_moments(cell_polygon(c)).planar_centroid() - x;
        keyed.emplace_back(std::atan2(g.y, g.x), c);
      }
      std::sort(keyed.begin(), keyed.end());
      for (std::size_t k = 0; k < list.size(); ++k) list[k] = keyed[k].second;
    }

    corner_offset.assign(nc + 1, 0);
    for (int c = 0; c < nc; ++c) corner_offset[c + 1] = corner_offset[c] + static_cast<int>(cells[c].size());

    cell_stencil.assign(nc, {});
    for (int c = 0; c < nc; ++c) {
      auto& s = cell_stencil[c];
      for (int p : cells[c])
        for (int d : node_cells[p]) s.push_back(d);
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    if (region.size() != nodes.size()) region.assign(nodes.size(), RegionTag::cartesian);
    if (interfacial.size() != nodes.size()) interfacial.assign(nodes.size(), 0);
  }

  /// Boundary faces touching node p, as (cell, local edge) pairs.
  std::vector<std::pair<int, int>> boundary_faces_of_node(int p) const {
    std::vector<std::pair<int, int>> out;
    for (int c : node_cells[p]) {
      const auto& pc = cells[c];
      const std::size_t n = pc.size();
      for (std::size_t i = 0; i < n; ++i) {
        if (face_neighbor[c][i] >= 0) continue;
        if (pc[i] == p || pc[(i + 1) % n] == p) out.emplace_back(c, static_cast<int>(i));
      }
    }
    return out;
  }

  bool is_boundary_node(int p) const { return !boundary_faces_of_node(p).empty(); }
};

struct CellMeasures {
  double area = 0.0;     // planar area A_c
  double volume = 0.0;   // R-weighted volume V_c (2*pi omitted)
  double rbar = 0.0;     // V_c / A_c
  Vec2 centroid;         // R-weighted centroid
  Vec2 planar_centroid;
};

inline CellMeasures measures_from_moments(const PolygonMoments& m, Geometry g) {
  CellMeasures out;
  out.area = m.area();
  out.volume = m.volume(g);
  out.rbar = out.volume / out.area;
  out.centroid = m.first(g) / out.volume;
  out.planar_centroid = m.planar_centroid();
  return out;
}

inline CellMeasures cell_measures(const Mesh& mesh, int c, std::span<const Vec2> positions) {
  const PolygonMoments m = polygon_moments(mesh.cell_polygon(c, positions));
  if (!(m.area() > 0.0)) throw Error(ErrorKind::invalid_cell, "non-positive cell area", c);
  return measures_from_moments(m, mesh.geometry);
}

inline CellMeasures cell_measures(const Mesh& mesh, int c) { return cell_measures(mesh, c, mesh.nodes); }

/// Per-corner half-edge lengths and outward unit normals.
struct CornerGeometry {
  double len_minus = 0.0;  // half length of [p^- p]
  double len_plus = 0.0;   // half length of [p p^+]
  Vec2 n_minus;
  Vec2 n_plus;

  /// Corner normal L_pc N_pc.
  Vec2 corner_normal() const { return n_minus * len_minus + n_plus * len_plus; }
};

inline CornerGeometry corner_geometry(const Vec2& prev, const Vec2& x, const Vec2& next, int cell = -1) {
  const Vec2 em = x - prev;
  const Vec2 ep = next - x;
  const double lm = norm(em);
  const double lp = norm(ep);
  if (lm == 0.0 || lp == 0.0) throw Error(ErrorKind::degenerate_edge, "zero-length edge", cell);
  return {0.5 * lm, 0.5 * lp, perp_right(em) / lm, perp_right(ep) / lp};
}

/// Corner geometry at local vertex i of cell c.
inline CornerGeometry corner_geometry_local(const Mesh& mesh, int c, int i, std::span<const Vec2> positions) {
  const auto& pc = mesh.cells[c];
  const int n = static_cast<int>(pc.size());
  return corner_geometry(positions[pc[(i + n - 1) % n]], positions[pc[i]], positions[pc[(i + 1) % n]], c);
}

inline CornerGeometry corner_geometry(const Mesh& mesh, int c, int node) {
  const int i = mesh.local_index(c, node);
  if (i < 0) throw Error(ErrorKind::out_of_range, "node is not a vertex of the cell", c);
  return corner_geometry_local(mesh, c, i, mesh.nodes);
}

struct ValidationReport {
  std::vector<int> invalid_cells;                 // non-positive area or self-intersecting
  std::vector<std::pair<int, int>> folded_corners;  // (cell, node) with non-positive corner triangle

  bool untangled() const { return invalid_cells.empty(); }
  bool ok() const { return invalid_cells.empty() && folded_corners.empty(); }
};

inline ValidationReport validate(const Mesh& mesh, std::span<const Vec2> positions) {
  ValidationReport r;
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const Polygon poly = mesh.cell_polygon(c, positions);
    if (!(signed_area(poly) > 0.0) || is_self_intersecting(poly)) r.invalid_cells.push_back(c);
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (!(triangle_area(poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]) > 0.0))
        r.folded_corners.emplace_back(c, mesh.cells[c][i]);
    }
  }
  return r;
}

inline ValidationReport validate(const Mesh& mesh) { return validate(mesh, mesh.nodes); }

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

struct BoxTags {
  BoundaryTag left = BoundaryTag::wall;
  BoundaryTag right = BoundaryTag::wall;
  BoundaryTag bottom = BoundaryTag::wall;
  BoundaryTag top = BoundaryTag::wall;
};

/// Structured nx-by-ny box [lo, hi].
inline Mesh make_cartesian_mesh(int nx, int ny, Vec2 lo, Vec2 hi, Geometry g, BoxTags tags = {}) {
  Mesh m;
  m.geometry = g;
  const auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.nodes.push_back({lo.x + (hi.x - lo.x) * i / nx, lo.y + (hi.y - lo.y) * j / ny});
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      m.cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
      std::vector<BoundaryTag> t(4, BoundaryTag::none);
      if (j == 0) t[0] = tags.bottom;
      if (i == nx - 1) t[1] = tags.right;
      if (j == ny - 1) t[2] = tags.top;
      if (i == 0) t[3] = tags.left;
      m.face_tag.push_back(t);
    }
  }
  m.region.assign(m.nodes.size(), RegionTag::cartesian);
  m.build_topology();
  return m;
}

struct PolarTags {
  BoundaryTag inner = BoundaryTag::wall;
  BoundaryTag outer = BoundaryTag::wall;
  BoundaryTag start = BoundaryTag::symmetry;  // side at theta0
  BoundaryTag end = BoundaryTag::symmetry;    // side at theta1
};

/// Equi-angular polar sector. `radii` are the ring radii; radii[0] == 0 puts a node at the
/// origin and makes the first ring triangles. Cells are numbered ring by ring.
inline Mesh make_polar_mesh(int n_theta, std::span<const double> radii, double theta0, double theta1, Geometry g,
                            PolarTags tags = {}) {
  Mesh m;
  m.geometry = g;
  const bool origin = radii.front() == 0.0;
  const int nr = static_cast<int>(radii.size()) - 1;
  const int first_ring = origin ? 1 : 0;
  if (origin) m.nodes.push_back({0.0, 0.0});
  const int base = origin ? 1 : 0;
  const auto id = [&](int j, int i) { return base + (j - first_ring) * (n_theta + 1) + i; };
  for (int j = first_ring; j <= nr; ++j) {
    for (int i = 0; i <= n_theta; ++i) {
      const double th = theta0 + (theta1 - theta0) * i / n_theta;
      Vec2 p{radii[j] * std::cos(th), radii[j] * std::sin(th)};
      if (i == 0 && std::abs(std::sin(theta0)) < 1e-15) p.y = 0.0;
      if (i == n_theta && std::abs(std::sin(theta1)) < 1e-15) p.y = 0.0;
      m.nodes.push_back(p);
    }
  }
  for (int j = 0; j < nr; ++j) {
    for (int i = 0; i < n_theta; ++i) {
      if (j == 0 && origin) {
        m.cells.push_back({0, id(1, i), id(1, i + 1)});
        std::vector<BoundaryTag> t(3, BoundaryTag::none);
        if (i == 0) t[0] = tags.start;
        if (nr == 1) t[1] = tags.outer;
        if (i == n_theta - 1) t[2] = tags.end;
        m.face_tag.push_back(t);
      } else {
        m.cells.push_back({id(j, i), id(j + 1, i), id(j + 1, i + 1), id(j, i + 1)});
        std::vector<BoundaryTag> t(4, BoundaryTag::none);
        if (i == 0) t[0] = tags.start;
        if (j == nr - 1) t[1] = tags.outer;
        if (i == n_theta - 1) t[2] = tags.end;
        if (j == 0) t[3] = tags.inner;
        m.face_tag.push_back(t);
      }
    }
  }
  m.region.assign(m.nodes.size(), RegionTag::polar);
  m.build_topology();
  return m;
}

inline std::vector<double> uniform_radii(int n_r, double r_max, double r_min = 0.0) {
  std::vector<double> r(n_r + 1);
  for (int j = 0; j <= n_r; ++j) r[j] = r_min + (r_max - r_min) * j / n_r;
  return r;
}

struct MixedGridParams {
  double core_half_width = 0.3;  // square core [-a, a] x [0, a]
  int core_cells = 6;            // cells across the core width (even)
  int transition_rings = 2;      // rings blending the square perimeter into the first circle
  double first_radius = 0.6;     // radius reached by the last transition ring
  int outer_rings = 4;
  double outer_radius = 1.0;
};

/// Upper half-plane grid: a Cartesian square core surrounded by polar rings. Core nodes are tagged
/// cartesian, ring nodes polar; nodes on the square perimeter are flagged interfacial and tagged
/// cartesian.
inline Mesh make_mixed_mesh(const MixedGridParams& prm, Geometry g, BoundaryTag outer = BoundaryTag::wall) {
  const double a = prm.core_half_width;
  const int nc = prm.core_cells;
  const int nh = nc / 2;
  Mesh m;
  m.geometry = g;
  std::vector<std::vector<int>> core(nc + 1, std::vector<int>(nh + 1));
  for (int j = 0; j <= nh; ++j)
    for (int i = 0; i <= nc; ++i) {
      core[i][j] = static_cast<int>(m.nodes.size());
      m.nodes.push_back({-a + 2.0 * a * i / nc, a * j / nh});
      const bool perim = (i == 0 || i == nc || j == nh);
      m.region.push_back(RegionTag::cartesian);
      m.interfacial.push_back(perim ? 1 : 0);
    }
  for (int j = 0; j < nh; ++j)
    for (int i = 0; i < nc; ++i) {
      m.cells.push_back({core[i][j], core[i + 1][j], core[i + 1][j + 1], core[i][j + 1]});
      std::vector<BoundaryTag> t(4, BoundaryTag::none);
      if (j == 0) t[0] = BoundaryTag::symmetry;
      m.face_tag.push_back(t);
    }
  // Perimeter walk from (a, 0) counterclockwise to (-a, 0): 2*nc segments.
  std::vector<int> perim;
  for (int j = 0; j <= nh; ++j) perim.push_back(core[nc][j]);
  for (int i = nc - 1; i >= 0; --i) perim.push_back(core[i][nh]);
  for (int j = nh - 1; j >= 0; --j) perim.push_back(core[0][j]);
  const int np = static_cast<int>(perim.size());  // 2*nc + 1
  const int rings = prm.transition_rings + prm.outer_rings;
  std::vector<int> prev = perim;
  for (int r = 1; r <= rings; ++r) {
    std::vector<int> ring(np);
    for (int k = 0; k < np; ++k) {
      const double th = std::numbers::pi * k / (np - 1);
      const Vec2 dir{std::cos(th), std::sin(th)};
      Vec2 x;
      if (r <= prm.transition_rings) {
        const double t = static_cast<double>(r) / prm.transition_rings;
        x = m.nodes[perim[k]] * (1.0 - t) + dir * (prm.first_radius * t);
      } else {
        const double t = static_cast<double>(r - prm.transition_rings) / prm.outer_rings;
        x = dir * (prm.first_radius + (prm.outer_radius - prm.first_radius) * t);
      }
      if (k == 0 || k == np - 1) x.y = 0.0;
      ring[k] = static_cast<int>(m.nodes.size());
      m.nodes.push_back(x);
      m.region.push_back(RegionTag::polar);
      m.interfacial.push_back(0);
    }
    for (int k = 0; k + 1 < np; ++k) {
      m.cells.push_back({prev[k], ring[k], ring[k + 1], prev[k + 1]});
      std::vector<BoundaryTag> t(4, BoundaryTag::none);
      if (k == 0) t[0] = BoundaryTag::symmetry;
      if (r == rings) t[1] = outer;
      if (k == np - 2) t[2] = BoundaryTag::symmetry;
      m.face_tag.push_back(t);
    }
    prev = ring;
  }
  m.build_topology();
  return m;
}

}  // namespace ccale

#endif  // CCALE_MESH_HPP
