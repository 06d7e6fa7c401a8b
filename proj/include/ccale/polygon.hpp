#ifndef CCALE_POLYGON_HPP
#define CCALE_POLYGON_HPP

// Polygon primitives: exact monomial moments by Green's formula, half-plane
// clipping, triangulation and intersection of simple polygons.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ccale/vec2.hpp"

namespace ccale {

using Polygon = std::vector<Vec2>;
using Triangle = std::array<Vec2, 3>;

namespace detail {

constexpr double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace detail

/// Exact integral of x^a y^b over a counterclockwise polygon (signed for clockwise input).
///
/// Each edge contributes its closed-form line integral, so the cost is linear in the
/// vertex count and there is no quadrature error.
inline double moment_integrate(std::span<const Vec2> poly, int a, int b) {
  const std::size_t n = poly.size();
  if (n < 3) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p0 = poly[i];
    const Vec2& p1 = poly[(i + 1) % n];
    const double c = p0.x * p1.y - p1.x * p0.y;
    double inner = 0.0;
    for (int k = 0; k <= a; ++k) {
      for (int l = 0; l <= b; ++l) {
        inner += detail::binomial(k + l, l) * detail::binomial(a - k + b - l, b - l) *
                 detail::ipow(p0.x, k) * detail::ipow(p1.x, a - k) * detail::ipow(p0.y, l) *
                 detail::ipow(p1.y, b - l);
      }
    }
    sum += c * inner;
  }
  return sum / ((a + b + 2) * (a + b + 1) * detail::binomial(a + b, a));
}

/// Monomial moments up to second degree. Additive over disjoint pieces.
struct PolygonMoments {
  double m00 = 0.0;
  double m10 = 0.0, m01 = 0.0;
  double m20 = 0.0, m11 = 0.0, m02 = 0.0;

  PolygonMoments& operator+=(const PolygonMoments& o) {
    m00 += o.m00; m10 += o.m10; m01 += o.m01;
    m20 += o.m20; m11 += o.m11; m02 += o.m02;
    return *this;
  }
  PolygonMoments& operator-=(const PolygonMoments& o) {
    m00 -= o.m00; m10 -= o.m10; m01 -= o.m01;
    m20 -= o.m20; m11 -= o.m11; m02 -= o.m02;
    return *this;
  }
  PolygonMoments& operator*=(double s) {
    m00 *= s; m10 *= s; m01 *= s; m20 *= s; m11 *= s; m02 *= s;
    return *this;
  }
  friend PolygonMoments operator+(PolygonMoments a, const PolygonMoments& b) { return a += b; }
  friend PolygonMoments operator-(PolygonMoments a, const PolygonMoments& b) { return a -= b; }

  double area() const { return m00; }
  Vec2 planar_first() const { return {m10, m01}; }
  Vec2 planar_centroid() const { return Vec2{m10, m01} / m00; }

  /// Integral of R dA.
  double volume(Geometry g) const {
    const double a = alpha_of(g);
    return (1.0 - a) * m00 + a * m01;
  }
  /// Integral of R X dA.
  Vec2 first(Geometry g) const {
    const double a = alpha_of(g);
    return {(1.0 - a) * m10 + a * m11, (1.0 - a) * m01 + a * m02};
  }
  /// R-weighted centroid (the axisymmetric centroid for alpha = 1).
  Vec2 centroid(Geometry g) const { return first(g) / volume(g); }

  /// Integral of R * (value + grad . (X - center)) dA.
  double integrate_linear(Geometry g, double value, const Vec2& grad, const Vec2& center) const {
    const double v = volume(g);
    const Vec2 f = first(g);
    return value * v + dot(grad, f - center * v);
  }
};

inline PolygonMoments polygon_moments(std::span<const Vec2> poly) {
  PolygonMoments m;
  const std::size_t n = poly.size();
  if (n < 3) return m;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    const double c = p.x * q.y - q.x * p.y;
    m.m00 += c;
    m.m10 += c * (p.x + q.x);
    m.m01 += c * (p.y + q.y);
    m.m20 += c * (p.x * p.x + p.x * q.x + q.x * q.x);
    m.m02 += c * (p.y * p.y + p.y * q.y + q.y * q.y);
    m.m11 += c * (p.x * (2.0 * p.y + q.y) + q.x * (p.y + 2.0 * q.y));
  }
  m.m00 /= 2.0;
  m.m10 /= 6.0;
  m.m01 /= 6.0;
  m.m20 /= 12.0;
  m.m02 /= 12.0;
  m.m11 /= 24.0;
  return m;
}

inline double signed_area(std::span<const Vec2> poly) {
  double s = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) s += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * s;
}

inline double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * cross(b - a, c - a);
}

/// Keeps {X : dot(normal, X) <= dist}. Sutherland-Hodgman against one line.
///
/// For a non-convex input the output may contain zero-width bridges along the
/// cutting line; its winding number still equals the input's inside the
/// half-plane, so Green's-formula moments of the result are exact.
inline Polygon clip_halfplane(std::span<const Vec2> poly, const Vec2& normal, double dist) {
  Polygon out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  out.reserve(n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    const double sp = dot(normal, p) - dist;
    const double sq = dot(normal, q) - dist;
    if (sp <= 0.0) out.push_back(p);
    if ((sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0)) {
      const double t = sp / (sp - sq);
      out.push_back(p + (q - p) * t);
    }
  }
  if (out.size() < 3) out.clear();
  return out;
}

/// Clips `poly` against a convex counterclockwise polygon.
inline Polygon clip_convex(std::span<const Vec2> poly, std::span<const Vec2> convex) {
  Polygon cur(poly.begin(), poly.end());
  const std::size_t m = convex.size();
  for (std::size_t i = 0; i < m && !cur.empty(); ++i) {
    const Vec2& a = convex[i];
    const Vec2& b = convex[(i + 1) % m];
    const Vec2 n = perp_right(b - a);
    cur = clip_halfplane(cur, n, dot(n, a));
  }
  return cur;
}

struct BoundingBox {
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

  void add(const Vec2& p) {
    lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y);
  }
  bool overlaps(const BoundingBox& o) const {
    return lo.x <= o.hi.x && o.lo.x <= hi.x && lo.y <= o.hi.y && o.lo.y <= hi.y;
  }
};

inline BoundingBox bounding_box(std::span<const Vec2> poly) {
  BoundingBox b;
  for (const auto& p : poly) b.add(p);
  return b;
}

inline bool is_convex(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (triangle_area(poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]) < 0.0) return false;
  }
  return signed_area(poly) > 0.0;
}

namespace detail {

inline bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) &&
         ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0));
}

inline bool point_in_triangle(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
  return cross(b - a, p - a) >= 0.0 && cross(c - b, p - b) >= 0.0 && cross(a - c, p - c) >= 0.0;
}

}  // namespace detail

/// True when two non-adjacent edges properly cross.
inline bool is_self_intersecting(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n < 4) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (detail::segments_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) return true;
    }
  }
  return false;
}

/// Ear clipping of a simple counterclockwise polygon. Empty result if no ear can be found.
inline std::vector<Triangle> ear_clip(std::span<const Vec2> poly) {
  std::vector<Triangle> tris;
  std::vector<std::size_t> idx(poly.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  while (idx.size() > 3) {
    bool found = false;
    const std::size_t m = idx.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Vec2& a = poly[idx[(i + m - 1) % m]];
      const Vec2& b = poly[idx[i]];
      const Vec2& c = poly[idx[(i + 1) % m]];
      if (triangle_area(a, b, c) <= 0.0) continue;
      bool contains = false;
      for (std::size_t j = 0; j < m && !contains; ++j) {
        if (j == i || j == (i + 1) % m || j == (i + m - 1) % m) continue;
        const Vec2& p = poly[idx[j]];
        if (p == a || p == b || p == c) continue;
        contains = detail::point_in_triangle(p, a, b, c);
      }
      if (contains) continue;
      tris.push_back({a, b, c});
      idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(i));
      found = true;
      break;
    }
    if (!found) return {};
  }
  if (idx.size() == 3) {
    const Triangle t{poly[idx[0]], poly[idx[1]], poly[idx[2]]};
    if (triangle_area(t[0], t[1], t[2]) > 0.0) tris.push_back(t);
  }
  return tris;
}

/// Convex decomposition into triangles: vertex fan for convex input, centroid fan
/// when the centroid sees every edge, ear clipping otherwise.
inline std::vector<Triangle> triangulate(std::span<const Vec2> poly) {
  std::vector<Triangle> tris;
  const std::size_t n = poly.size();
  if (n < 3) return tris;
  if (is_convex(poly)) {
    for (std::size_t i = 1; i + 1 < n; ++i) tris.push_back({poly[0], poly[i], poly[i + 1]});
    return tris;
  }
  const PolygonMoments m = polygon_moments(poly);
  if (m.m00 > 0.0) {
    const Vec2 g = m.planar_centroid();
    bool star = true;
    for (std::size_t i = 0; i < n && star; ++i) star = triangle_area(g, poly[i], poly[(i + 1) % n]) > 0.0;
    if (star) {
      for (std::size_t i = 0; i < n; ++i) tris.push_back({g, poly[i], poly[(i + 1) % n]});
      return tris;
    }
  }
  return ear_clip(poly);
}

/// Intersection of `subject` with `target` as a list of convex pieces.
///
/// The target is decomposed into triangles; the subject is triangulated as well
/// when possible so every piece is a simple convex polygon. Subjects that cannot
/// be triangulated (degenerate bridges from nested clipping) are clipped whole,
/// which keeps the piece moments exact.
inline std::vector<Polygon> polygon_intersect(std::span<const Vec2> subject, std::span<const Vec2> target) {
  std::vector<Polygon> pieces;
  if (subject.size() < 3 || target.size() < 3) return pieces;
  if (!bounding_box(subject).overlaps(bounding_box(target))) return pieces;
  const auto ttris = triangulate(target);
  const auto stris = triangulate(subject);
  for (const auto& tt : ttris) {
    if (!stris.empty()) {
      for (const auto& st : stris) {
        Polygon piece = clip_convex(st, tt);
        if (!piece.empty()) pieces.push_back(std::move(piece));
      }
    } else {
      Polygon piece = clip_convex(subject, tt);
      if (!piece.empty()) pieces.push_back(std::move(piece));
    }
  }
  return pieces;
}

inline PolygonMoments intersection_moments(std::span<const Vec2> subject, std::span<const Vec2> target) {
  PolygonMoments m;
  for (const auto& piece : polygon_intersect(subject, target)) m += polygon_moments(piece);
  return m;
}

/// Mean-value coordinates of `x` with respect to the polygon vertices.
/// Reproduces affine functions exactly; returns nullopt for a degenerate polygon.
inline std::optional<std::vector<double>> mean_value_coordinates(std::span<const Vec2> poly, const Vec2& x) {
  const std::size_t n = poly.size();
  if (n < 3) return std::nullopt;
  std::vector<Vec2> s(n);
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = poly[i] - x;
    r[i] = norm(s[i]);
  }
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (r[i] == 0.0) {
      w[i] = 1.0;
      return w;
    }
  }
  std::vector<double> tan_half(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const double a = cross(s[i], s[j]);
    const double d = dot(s[i], s[j]);
    if (a == 0.0 && d < 0.0) {
      // x lies on edge (i, j): linear interpolation along that edge.
      std::fill(w.begin(), w.end(), 0.0);
      w[i] = r[j] / (r[i] + r[j]);
      w[j] = r[i] / (r[i] + r[j]);
      return w;
    }
    tan_half[i] = (r[i] * r[j] - d) / a;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = (tan_half[(i + n - 1) % n] + tan_half[i]) / r[i];
    total += w[i];
  }
  if (!std::isfinite(total) || total == 0.0) return std::nullopt;
  for (auto& v : w) v /= total;
  return w;
}

/// Maps `x` from `from` to `to` (same vertex count) through mean-value coordinates.
/// Falls back to `fallback` when the coordinates are undefined.
inline Vec2 transport_point(std::span<const Vec2> from, std::span<const Vec2> to, const Vec2& x, const Vec2& fallback) {
  const auto w = mean_value_coordinates(from, x);
  if (!w) return fallback;
  Vec2 y;
  for (std::size_t i = 0; i < to.size(); ++i) y += to[i] * (*w)[i];
  return y;
}

}  // namespace ccale

#endif  // CCALE_POLYGON_HPP
