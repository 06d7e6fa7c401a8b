#ifndef CCALE_MOF_HPP
#define CCALE_MOF_HPP

// Moment-of-fluid interface reconstruction. Volumes are always R-weighted; the
// centroid matched by the optimizer is either R-weighted or planar.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "ccale/error.hpp"
#include "ccale/polygon.hpp"
#include "ccale/vec2.hpp"

namespace ccale::mof {

enum class CentroidMode : std::uint8_t { planar, axisymmetric };

/// Zeroth and first moments of a region, in both measures.
struct MomentSet {
  double m0 = 0.0;     // integral of R dA
  Vec2 m1;             // integral of R X dA
  double m0_pl = 0.0;  // integral of dA
  Vec2 m1_pl;          // integral of X dA

  static MomentSet of(const PolygonMoments& pm, Geometry g) {
    return {pm.volume(g), pm.first(g), pm.area(), pm.planar_first()};
  }
  Vec2 centroid(CentroidMode mode) const { return mode == CentroidMode::planar ? m1_pl / m0_pl : m1 / m0; }
};

inline MomentSet moments_of(std::span<const Vec2> poly, Geometry g) { return MomentSet::of(polygon_moments(poly), g); }

/// What a material must reproduce inside a cell.
struct Target {
  double volume = 0.0;  // R-weighted
  Vec2 centroid;        // in the reconstruction's centroid mode
};

/// {X : n(theta) . X <= d} intersected with the polygon.
inline Polygon cut_below(std::span<const Vec2> poly, double theta, double d) {
  return clip_halfplane(poly, unit_from_angle(theta), d);
}
/// {X : n(theta) . X >= d} intersected with the polygon.
inline Polygon cut_above(std::span<const Vec2> poly, double theta, double d) {
  return clip_halfplane(poly, -unit_from_angle(theta), -d);
}

constexpr double volume_tolerance = 1e-12;

/// Line position d such that the part of `poly` below the line has R-weighted volume `target`.
/// Between consecutive vertex projections the clipped volume is a cubic in d, so the bracketing
/// interval is found on the vertices and the root is taken on the interpolating cubic.
inline double flood_fill(std::span<const Vec2> poly, double theta, double target, Geometry g) {
  const Vec2 n = unit_from_angle(theta);
  std::vector<double> proj;
  proj.reserve(poly.size());
  for (const auto& p : poly) proj.push_back(dot(n, p));
  std::sort(proj.begin(), proj.end());
  proj.erase(std::unique(proj.begin(), proj.end()), proj.end());
  const double lo = proj.front(), hi = proj.back();
  const double total = polygon_moments(poly).volume(g);
  if (target < -volume_tolerance * total || target > total * (1.0 + volume_tolerance))
    throw Error(ErrorKind::out_of_range, "flood-fill target outside the polygon volume");
  if (target <= 0.0) return lo;
  if (target >= total) return hi;
  const auto f = [&](double d) { return polygon_moments(clip_halfplane(poly, n, d)).volume(g) - target; };

  std::size_t a = 0, b = proj.size() - 1;
  double fa = -target, fb = total - target;
  while (b - a > 1) {
    const std::size_t m = (a + b) / 2;
    const double fm = f(proj[m]);
    if (fm == 0.0) return proj[m];
    if (fm < 0.0) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  const double x0 = proj[a], x3 = proj[b], w = x3 - x0;
  if (!(w > 1e-15 * (hi - lo))) return x0;
  const double f1 = f(x0 + w / 3.0), f2 = f(x0 + 2.0 * w / 3.0);
  // The clipped volume is a cubic in d between consecutive vertex projections. With u = 3(d - x0)/w
  // the samples sit at u = 0..3; forward differences give the monomial coefficients.
  const double d1 = f1 - fa, d2 = f2 - 2.0 * f1 + fa, d3 = fb - 3.0 * f2 + 3.0 * f1 - fa;
  const double c0 = fa, c1 = d1 - d2 / 2.0 + d3 / 3.0, c2 = (d2 - d3) / 2.0, c3 = d3 / 6.0;
  const auto p = [&](double u) { return c0 + u * (c1 + u * (c2 + u * c3)); };
  const auto dp = [&](double u) { return c1 + u * (2.0 * c2 + u * 3.0 * c3); };
  // Safeguarded Newton: steps leaving the bracket fall back to bisection.
  double ua = 0.0, ub = 3.0;
  double u = 3.0 * fa / (fa - fb);
  for (int it = 0; it < 100; ++it) {
    const double pu = p(u);
    if (pu == 0.0) break;
    (pu < 0.0 ? ua : ub) = u;
    const double dpu = dp(u);
    double next = dpu > 0.0 ? u - pu / dpu : 0.5 * (ua + ub);
    if (!(next > ua && next < ub)) next = 0.5 * (ua + ub);
    const bool done = std::abs(next - u) <= 1e-15 * 3.0 || ub - ua <= 1e-15 * 3.0;
    u = next;
    if (done) break;
  }
  return x0 + w * u / 3.0;
}

struct SingleResult {
  double theta = 0.0;
  double d = 0.0;
  Polygon piece;        // material side
  double defect = 0.0;  // squared centroid distance
  bool converged = true;
};

namespace detail {

inline double wrap_angle(double t) {
  t = std::fmod(t, 2.0 * std::numbers::pi);
  return t < 0.0 ? t + 2.0 * std::numbers::pi : t;
}

struct Evaluation {
  double d;
  Polygon piece;
  Vec2 centroid;
};

inline Evaluation evaluate(std::span<const Vec2> poly, double theta, const Target& t, Geometry g, CentroidMode mode) {
  Evaluation e;
  e.d = flood_fill(poly, theta, t.volume, g);
  e.piece = cut_below(poly, theta, e.d);
  const MomentSet ms = moments_of(e.piece, g);
  e.centroid = ms.m0 > 0.0 && ms.m0_pl > 0.0 ? ms.centroid(mode) : Vec2{};
  return e;
}

}  // namespace detail

/// Single-interface MOF: the half-plane cut with the prescribed volume whose centroid is closest
/// to the target centroid.
inline SingleResult reconstruct_single(std::span<const Vec2> poly, const Target& target, Geometry g,
                                       CentroidMode mode = CentroidMode::axisymmetric) {
  const MomentSet whole = moments_of(poly, g);
  const auto objective = [&](double theta) {
    return norm2(detail::evaluate(poly, theta, target, g, mode).centroid - target.centroid);
  };

  constexpr int seeds = 16;
  const double step = 2.0 * std::numbers::pi / seeds;
  std::vector<double> fs(seeds);
  for (int i = 0; i < seeds; ++i) fs[i] = objective(step * i);

  // Brackets: every discrete local minimum of the seed ring, plus the centroid-direction guess.
  std::vector<double> centers;
  for (int i = 0; i < seeds; ++i)
    if (fs[i] <= fs[(i + seeds - 1) % seeds] && fs[i] <= fs[(i + 1) % seeds]) centers.push_back(step * i);
  const Vec2 toward = whole.centroid(mode) - target.centroid;
  if (norm(toward) > 0.0) centers.push_back(std::atan2(toward.y, toward.x));

  SingleResult res;
  double best = 0.0, fbest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < seeds; ++i)
    if (fs[i] < fbest) {
      fbest = fs[i];
      best = step * i;
    }
  for (double c0 : centers) {
    std::uintmax_t iters = 100;
    const auto [tb, fb] = boost::math::tools::brent_find_minima(objective, c0 - step, c0 + step, 30, iters);
    if (iters >= 100) res.converged = false;
    if (fb < fbest) {
      best = tb;
      fbest = fb;
    }
  }

  // Gauss-Newton polish on the centroid residual; converges quadratically for exact cuts.
  const double scale = std::sqrt(whole.m0_pl);
  for (int it = 0; it < 12 && fbest > 1e-30 * scale * scale; ++it) {
    const double h = 1e-7;
    const Vec2 r = detail::evaluate(poly, best, target, g, mode).centroid - target.centroid;
    const Vec2 rp = detail::evaluate(poly, best + h, target, g, mode).centroid;
    const Vec2 rm = detail::evaluate(poly, best - h, target, g, mode).centroid;
    const Vec2 jac = (rp - rm) / (2.0 * h);
    const double jj = norm2(jac);
    if (!(jj > 0.0)) break;
    const double trial = best - dot(jac, r) / jj;
    const double ft = objective(trial);
    if (!(ft < fbest)) break;
    best = trial;
    fbest = ft;
  }

  best = detail::wrap_angle(best);
  const detail::Evaluation e = detail::evaluate(poly, best, target, g, mode);
  res.theta = best;
  res.d = e.d;
  res.piece = e.piece;
  res.defect = norm2(e.centroid - target.centroid);
  return res;
}

/// Result of nested dissection for one cell.
struct Partition {
  std::vector<int> order;             // materials in cutting order (present ones only)
  std::vector<Polygon> pieces;        // per material; empty when absent
  std::vector<double> theta, d;       // per cut, aligned with `order` (K-1 entries)
  double defect = 0.0;                // sum of squared centroid distances
  bool converged = true;
};

/// Materials whose volume is below this fraction of the cell are treated as absent.
constexpr double absent_fraction = 1e-14;

/// Nested-dissection MOF over all orderings of the present materials.
inline Partition reconstruct_multi(std::span<const Vec2> poly, std::span<const Target> targets, Geometry g,
                                   CentroidMode mode = CentroidMode::axisymmetric) {
  const std::size_t nmat = targets.size();
  const double vcell = polygon_moments(poly).volume(g);
  std::vector<int> present;
  for (std::size_t k = 0; k < nmat; ++k)
    if (targets[k].volume > absent_fraction * vcell) present.push_back(static_cast<int>(k));
  if (present.size() > 4) throw Error(ErrorKind::config, "more than four materials in one cell");

  Partition best;
  best.pieces.assign(nmat, {});
  if (present.empty()) return best;
  if (present.size() == 1) {
    best.order = present;
    best.pieces[present[0]] = Polygon(poly.begin(), poly.end());
    const MomentSet ms = moments_of(poly, g);
    best.defect = norm2(ms.centroid(mode) - targets[present[0]].centroid);
    return best;
  }

  best.defect = std::numeric_limits<double>::infinity();
  std::vector<int> order = present;
  std::sort(order.begin(), order.end());
  do {
    Partition cand;
    cand.order = order;
    cand.pieces.assign(nmat, {});
    Polygon rest(poly.begin(), poly.end());
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      const int k = order[i];
      const double vrest = polygon_moments(rest).volume(g);
      Target t = targets[k];
      t.volume = std::min(t.volume, vrest);
      SingleResult r = rest.empty() ? SingleResult{} : reconstruct_single(rest, t, g, mode);
      cand.converged = cand.converged && r.converged;
      cand.theta.push_back(r.theta);
      cand.d.push_back(r.d);
      cand.pieces[k] = std::move(r.piece);
      rest = rest.empty() ? Polygon{} : cut_above(rest, r.theta, r.d);
    }
    cand.pieces[order.back()] = rest;
    for (int k : order) {
      const MomentSet ms = moments_of(cand.pieces[k], g);
      const Vec2 x = ms.m0 > 0.0 && ms.m0_pl > 0.0 ? ms.centroid(mode) : Vec2{};
      cand.defect += norm2(x - targets[k].centroid);
    }
    if (cand.defect < best.defect) best = std::move(cand);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

/// Material centroids re-expressed on the moved cell through mean-value coordinates.
inline std::vector<Vec2> update_centroids_lagrangian(std::span<const Vec2> old_cell, std::span<const Vec2> new_cell,
                                                     std::span<const Vec2> centroids, Geometry g) {
  const Vec2 fallback = polygon_moments(new_cell).centroid(g);
  std::vector<Vec2> out;
  for (const auto& x : centroids) out.push_back(transport_point(old_cell, new_cell, x, fallback));
  return out;
}

}  // namespace ccale::mof

#endif  // CCALE_MOF_HPP
