#ifndef CCALE_MOF_STATIC_HPP
#define CCALE_MOF_STATIC_HPP

// Static reconstruction benchmarks on the unit cell: three-material filament,
// T-junction and Y-junction partitions bounded by circular arcs of radius chi,
// and a refinement study on a circular interface.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "ccale/mesh.hpp"
#include "ccale/mof.hpp"
#include "ccale/polygon.hpp"

namespace ccale::mof {

enum class Layout { filament, t_junction, y_junction };

inline const char* to_string(Layout l) {
  switch (l) {
    case Layout::filament: return "filament";
    case Layout::t_junction: return "t-junction";
    case Layout::y_junction: return "y-junction";
  }
  return "?";
}

/// Points of the arc of radius `chi` from p to q (both included), center on the right of p->q.
/// With segments == 1 the arc is replaced by its chord.
inline Polygon arc_points(Vec2 p, Vec2 q, double chi, int segments) {
  if (segments <= 1) return {p, q};
  const Vec2 d = q - p;
  const double len = norm(d);
  const Vec2 mid = (p + q) * 0.5;
  const double h = std::sqrt(std::max(chi * chi - 0.25 * len * len, 0.0));
  const Vec2 c = mid + perp_right(d) / len * h;
  const double a0 = std::atan2(p.y - c.y, p.x - c.x);
  const double sweep = std::atan2(cross(p - c, q - c), dot(p - c, q - c));
  Polygon out{p};
  for (int i = 1; i < segments; ++i) out.push_back(c + unit_from_angle(a0 + sweep * i / segments) * chi);
  out.push_back(q);
  return out;
}

/// Point of the arc (or chord) halfway between p and q.
inline Vec2 arc_midpoint(Vec2 p, Vec2 q, double chi, int segments) {
  const Vec2 mid = (p + q) * 0.5;
  if (segments <= 1) return mid;
  const Vec2 d = q - p;
  const double len = norm(d);
  const double h = std::sqrt(std::max(chi * chi - 0.25 * len * len, 0.0));
  return mid - perp_right(d) / len * (chi - h);
}

namespace detail {

/// Concatenates vertex runs, dropping repeated junction points.
inline Polygon chain(std::initializer_list<Polygon> runs) {
  Polygon out;
  for (const auto& r : runs)
    for (const auto& x : r)
      if (out.empty() || !(out.back() == x)) out.push_back(x);
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

inline Polygon reversed(Polygon p) {
  std::reverse(p.begin(), p.end());
  return p;
}

}  // namespace detail

/// The exact three-material partition of [0,1]^2.
inline std::vector<Polygon> true_partition(Layout layout, double chi, int segments) {
  using detail::chain;
  using detail::reversed;
  const auto arc = [&](Vec2 p, Vec2 q, int n) { return arc_points(p, q, chi, n); };
  std::vector<Polygon> parts(3);
  switch (layout) {
    case Layout::filament: {
      const Vec2 a0{0, 0.3}, a1{1, 0.4}, b0{0, 0.45}, b1{1, 0.55};
      parts[0] = chain({{{0, 0}, {1, 0}}, reversed(arc(a0, a1, segments))});
      parts[1] = chain({arc(a0, a1, segments), reversed(arc(b0, b1, segments))});
      parts[2] = chain({arc(b0, b1, segments), {{1, 1}, {0, 1}}});
      break;
    }
    case Layout::t_junction: {
      const Vec2 a0{0, 0.4}, a1{1, 0.45}, top{0.52, 1.0};
      const Vec2 j = arc_midpoint(a0, a1, chi, segments);
      // Both halves of the first arc lie on the same circle.
      const int half = std::max(1, segments / 2);
      parts[0] = chain({{{0, 0}, {1, 0}}, reversed(arc(j, a1, half)), reversed(arc(a0, j, half))});
      parts[1] = chain({arc(a0, j, half), arc(j, top, segments), {{0, 1}}});
      parts[2] = chain({arc(j, a1, half), {{1, 1}}, reversed(arc(j, top, segments))});
      break;
    }
    case Layout::y_junction: {
      const Vec2 j{0.5, 0.45}, l{0, 0.7}, r{1, 0.65}, b{0.55, 0};
      parts[0] = chain({arc(j, r, segments), {{1, 1}, {0, 1}}, reversed(arc(j, l, segments))});
      parts[1] = chain({arc(j, l, segments), {{0, 0}}, reversed(arc(j, b, segments))});
      parts[2] = chain({arc(j, b, segments), {{1, 0}}, reversed(arc(j, r, segments))});
      break;
    }
  }
  return parts;
}

inline double intersection_area(std::span<const Vec2> a, std::span<const Vec2> b) {
  return intersection_moments(a, b).area();
}

/// Area of the symmetric difference of two simple polygons.
inline double symmetric_difference(std::span<const Vec2> a, std::span<const Vec2> b) {
  const double aa = a.size() >= 3 ? polygon_moments(a).area() : 0.0;
  const double bb = b.size() >= 3 ? polygon_moments(b).area() : 0.0;
  if (aa == 0.0 || bb == 0.0) return aa + bb;
  return std::max(aa + bb - 2.0 * intersection_area(a, b), 0.0);
}

struct StaticResult {
  Partition partition;
  std::vector<Polygon> truth;
  std::vector<double> symdiff;  // per material
};

inline StaticResult run_static(Layout layout, double chi, int segments, Geometry g, CentroidMode mode) {
  const Polygon cell{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  StaticResult res;
  res.truth = true_partition(layout, chi, segments);
  std::vector<Target> targets;
  for (const auto& t : res.truth) {
    const MomentSet ms = moments_of(t, g);
    targets.push_back({ms.m0, ms.centroid(mode)});
  }
  res.partition = reconstruct_multi(cell, targets, g, mode);
  for (std::size_t k = 0; k < res.truth.size(); ++k)
    res.symdiff.push_back(symmetric_difference(res.partition.pieces[k], res.truth[k]));
  return res;
}

/// Polygonal disc (counterclockwise) with `n` vertices.
inline Polygon disc_polygon(Vec2 center, double radius, int n) {
  Polygon p;
  for (int i = 0; i < n; ++i) p.push_back(center + unit_from_angle(2.0 * std::numbers::pi * i / n) * radius);
  return p;
}

/// Total symmetric-difference area of single-interface reconstructions of a disc on an
/// n-by-n grid of the unit square. The disc is a fine convex polygon, so every true
/// piece and every reconstructed piece is convex.
inline double circle_error(int n, Vec2 center, double radius, Geometry g, CentroidMode mode,
                           int disc_vertices = 40000) {
  const Polygon disc = disc_polygon(center, radius, disc_vertices);
  const Mesh m = make_cartesian_mesh(n, n, {0, 0}, {1, 1}, g);
  double err = 0.0;
  for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) {
    const Polygon cell = m.cell_polygon(c);
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
    for (const auto& x : cell) dmax = std::max(dmax, norm(x - center));
    const Vec2 nearest{std::clamp(center.x, cell[0].x, cell[2].x), std::clamp(center.y, cell[0].y, cell[2].y)};
    dmin = norm(nearest - center);
    if (dmax < radius * (1.0 - 1e-6) || dmin > radius) continue;
    const Polygon truth = clip_convex(disc, cell);
    const PolygonMoments pm = polygon_moments(truth);
    const double frac = pm.area() / polygon_moments(cell).area();
    if (frac < 1e-12 || frac > 1.0 - 1e-12) continue;
    const MomentSet ms = MomentSet::of(pm, g);
    const SingleResult r = reconstruct_single(cell, {ms.m0, ms.centroid(mode)}, g, mode);
    const double common = polygon_moments(clip_convex(truth, r.piece)).area();
    err += polygon_moments(r.piece).area() + pm.area() - 2.0 * common;
  }
  return err;
}

}  // namespace ccale::mof

#endif  // CCALE_MOF_STATIC_HPP
