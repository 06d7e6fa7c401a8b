#ifndef CCALE_REZONE_HPP
#define CCALE_REZONE_HPP

// Condition-number smoothing of node positions. Each node is smoothed in its own frame:
// Cartesian nodes in (X, Y), polar nodes in (r, theta) with the patch unwrapped around the
// node's angle. CNS is the same algorithm with every node Cartesian.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "ccale/error.hpp"
#include "ccale/mesh.hpp"
#include "ccale/vec2.hpp"

namespace ccale::rezone {

enum class Smoother : std::uint8_t { cns, gcns };
enum class BoundaryMode : std::uint8_t { off, straight_only, bezier };
enum class OmegaMode : std::uint8_t { fixed, adaptive };

struct RezoneConfig {
  int iterations = 1;
  Smoother smoother = Smoother::gcns;
  BoundaryMode boundary = BoundaryMode::straight_only;
  OmegaMode omega_mode = OmegaMode::adaptive;
  double omega = 1.0;  // fixed mode
  double mu = 1.0;     // adaptive mode scale
  bool interfacial_polar = false;

  void validate() const {
    if (iterations < 0) throw Error(ErrorKind::config, "rezone iterations must be non-negative");
    if (!(omega >= 0.0 && omega <= 1.0)) throw Error(ErrorKind::config, "omega must lie in [0, 1]");
    if (!(mu >= 0.0)) throw Error(ErrorKind::config, "mu must be non-negative");
  }
};

// ---------------------------------------------------------------------------
// Mapping
// ---------------------------------------------------------------------------

/// (X, Y) -> (r, theta) when polar, identity otherwise. The origin maps to (0, reference).
inline Vec2 map_to_polar(Vec2 x, bool polar, double reference = 0.0) {
  if (!polar) return x;
  const double r = std::hypot(x.x, x.y);
  if (r == 0.0) return {0.0, reference};
  return {r, std::atan2(x.y, x.x)};
}

inline Vec2 map_back(Vec2 xh, bool polar) {
  if (!polar) return xh;
  return {xh.x * std::cos(xh.y), xh.x * std::sin(xh.y)};
}

/// Local frame of one node: the node's own beta and angle. Neighbors are unwrapped relative to
/// the node, and the origin is replaced by its replica facing the node.
struct Frame {
  bool polar = false;
  Vec2 center;     // physical position of the frame node
  double theta = 0.0;

  static Frame at(Vec2 x, bool polar) {
    Frame f;
    f.polar = polar && (x.x != 0.0 || x.y != 0.0);
    f.center = x;
    if (f.polar) f.theta = std::atan2(x.y, x.x);
    return f;
  }

  Vec2 map(Vec2 q) const {
    if (!polar) return q;
    const double r = std::hypot(q.x, q.y);
    if (r == 0.0) return {0.0, theta};
    return {r, theta + std::atan2(cross(center, q), dot(center, q))};
  }
  Vec2 back(Vec2 qh) const { return map_back(qh, polar); }
};

// ---------------------------------------------------------------------------
// Condition number of a corner
// ---------------------------------------------------------------------------

struct Kappa {
  double value = 0.0;
  Vec2 grad;
  Mat2 hess;
  double area = 0.0;  // twice the corner triangle area
};

/// kappa = (|X+ - X|^2 + |X- - X|^2) / A with A = cross(X+ - X, X- - X), and its derivatives
/// with respect to X. A is linear in X, which keeps the Hessian short.
inline Kappa corner_kappa(Vec2 x, Vec2 next, Vec2 prev) {
  Kappa k;
  const Vec2 a = next - x;
  const Vec2 b = prev - x;
  const double s = norm2(a) + norm2(b);
  const double area = cross(a, b);
  k.area = area;
  k.value = s / area;
  const Vec2 gs = (a + b) * -2.0;
  const Vec2 d = prev - next;
  const Vec2 ga{-d.y, d.x};
  k.grad = gs / area - ga * (s / (area * area));
  k.hess = Mat2::identity() * (4.0 / area) - (Mat2::outer(gs, ga) + Mat2::outer(ga, gs)) * (1.0 / (area * area)) +
           Mat2::outer(ga, ga) * (2.0 * s / (area * area * area));
  return k;
}

/// Corners at one node: the two neighbors of the node in each incident cell, in the node frame.
struct Patch {
  std::vector<Vec2> next, prev;

  double functional(Vec2 x) const {
    double f = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      const double area = cross(next[i] - x, prev[i] - x);
      if (!(area > 0.0)) return std::numeric_limits<double>::infinity();
      f += (norm2(next[i] - x) + norm2(prev[i] - x)) / area;
    }
    return f;
  }

  Kappa total(Vec2 x) const {
    Kappa t;
    for (std::size_t i = 0; i < next.size(); ++i) {
      const Kappa k = corner_kappa(x, next[i], prev[i]);
      t.value += k.value;
      t.grad += k.grad;
      t.hess += k.hess;
      t.area = i == 0 ? k.area : std::min(t.area, k.area);
    }
    return t;
  }
};

inline Patch make_patch(const Mesh& mesh, int p, std::span<const Vec2> pos, const Frame& f) {
  Patch patch;
  for (int c : mesh.node_cells[p]) {
    const auto& pc = mesh.cells[c];
    const int n = static_cast<int>(pc.size());
    const int i = mesh.local_index(c, p);
    patch.next.push_back(f.map(pos[pc[(i + 1) % n]]));
    patch.prev.push_back(f.map(pos[pc[(i + n - 1) % n]]));
  }
  return patch;
}

namespace detail {

/// True when every corner of every cell around p is positive with p placed at x.
inline bool physical_ok(const Mesh& mesh, int p, std::span<const Vec2> pos, Vec2 x) {
  for (int c : mesh.node_cells[p]) {
    const auto& pc = mesh.cells[c];
    const std::size_t n = pc.size();
    const auto at = [&](std::size_t k) { return pc[k] == p ? x : pos[pc[k]]; };
    for (std::size_t k = 0; k < n; ++k)
      if (!(triangle_area(at((k + n - 1) % n), at(k), at((k + 1) % n)) > 0.0)) return false;
  }
  return true;
}

}  // namespace detail

/// One damped Newton step on F_p. Returns the new physical position (unchanged on failure).
inline Vec2 smooth_interior_node(const Mesh& mesh, int p, std::span<const Vec2> pos, bool polar) {
  const Vec2 x0 = pos[p];
  const Frame f = Frame::at(x0, polar);
  const Patch patch = make_patch(mesh, p, pos, f);
  const Vec2 xh = f.map(x0);
  const Kappa k = patch.total(xh);
  if (!(k.area > 0.0)) return x0;
  const auto ev = symmetric_eigenvalues(k.hess);
  if (!(ev[0] > 0.0) || !(k.hess.det() > 0.0)) return x0;
  const Vec2 step = k.hess.inverse() * k.grad;
  double lambda = 1.0;
  for (int h = 0; h <= 10; ++h, lambda *= 0.5) {
    const Vec2 trial = xh - step * lambda;
    const double ft = patch.functional(trial);
    if (!(ft <= k.value)) continue;
    const Vec2 x = f.back(trial);
    if (detail::physical_ok(mesh, p, pos, x)) return x;
  }
  return x0;
}

// ---------------------------------------------------------------------------
// Boundary nodes
// ---------------------------------------------------------------------------

/// Quadratic Bezier through a, b with B(1/2) = x.
struct Bezier {
  Vec2 a, mid, b;
  static Bezier through(Vec2 a, Vec2 x, Vec2 b) { return {a, x * 2.0 - (a + b) * 0.5, b}; }
  Vec2 operator()(double s) const { return a * ((1 - s) * (1 - s)) + mid * (2 * s * (1 - s)) + b * (s * s); }
};

enum class BoundaryKind : std::uint8_t { fixed, straight, curved };

struct BoundaryInfo {
  BoundaryKind kind = BoundaryKind::fixed;
  int minus = -1, plus = -1;  // boundary neighbors
};

/// Classification of a boundary node. Domain corners (tag change, kink sharper than ~45 degrees,
/// or anything but two boundary faces) are fixed.
inline BoundaryInfo classify_boundary_node(const Mesh& mesh, int p, std::span<const Vec2> pos) {
  BoundaryInfo info;
  const auto faces = mesh.boundary_faces_of_node(p);
  if (faces.size() != 2) return info;
  int other[2];
  Vec2 normal[2];
  BoundaryTag tag[2];
  for (int k = 0; k < 2; ++k) {
    const auto [c, i] = faces[k];
    const auto& pc = mesh.cells[c];
    const int a = pc[i], b = pc[(i + 1) % pc.size()];
    other[k] = a == p ? b : a;
    const Vec2 e = pos[b] - pos[a];
    normal[k] = perp_right(e) / norm(e);
    tag[k] = mesh.face_tag[c][i];
  }
  if (tag[0] != tag[1] || dot(normal[0], normal[1]) < 0.7) return info;
  info.minus = other[0];
  info.plus = other[1];
  const Vec2 xm = pos[info.minus], xp = pos[info.plus];
  const double chord2 = norm2(xp - xm);
  info.kind = std::abs(cross(xp - xm, pos[p] - xm)) <= 1e-12 * chord2 ? BoundaryKind::straight : BoundaryKind::curved;
  return info;
}

/// Minimizes F_p along the Bezier through the boundary neighbors. Straight boundaries are searched
/// on the physical line so they stay exactly straight; curved ones on the curve in the node frame.
inline Vec2 smooth_boundary_node(const Mesh& mesh, int p, std::span<const Vec2> pos, bool polar,
                                 const BoundaryInfo& info) {
  const Vec2 x0 = pos[p];
  if (info.kind == BoundaryKind::fixed) return x0;
  const Frame f = Frame::at(x0, polar);
  const Patch patch = make_patch(mesh, p, pos, f);
  const double f0 = patch.functional(f.map(x0));
  if (!std::isfinite(f0)) return x0;

  const bool physical = info.kind == BoundaryKind::straight;
  const Bezier curve = physical ? Bezier::through(pos[info.minus], x0, pos[info.plus])
                                : Bezier::through(f.map(pos[info.minus]), f.map(x0), f.map(pos[info.plus]));
  const auto point = [&](double s) { return physical ? curve(s) : f.back(curve(s)); };
  const auto mapped = [&](double s) { return physical ? f.map(curve(s)) : curve(s); };
  const double big = 1e300;
  const auto objective = [&](double s) {
    const double v = patch.functional(mapped(s));
    return std::isfinite(v) ? v : big;
  };
  std::uintmax_t iters = 100;
  const auto [s, fs] = boost::math::tools::brent_find_minima(objective, 0.0, 1.0, 40, iters);
  // Only a decrease beyond rounding moves the node; this keeps exact fixed points exact.
  if (!(fs < f0 * (1.0 - 1e-13))) return x0;
  const Vec2 x = point(s);
  return detail::physical_ok(mesh, p, pos, x) ? x : x0;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// Per-node polar flag (beta) for the chosen smoother.
inline std::vector<std::uint8_t> node_betas(const Mesh& mesh, const RezoneConfig& cfg) {
  std::vector<std::uint8_t> beta(mesh.num_nodes(), 0);
  if (cfg.smoother == Smoother::cns) return beta;
  for (std::size_t p = 0; p < mesh.num_nodes(); ++p) {
    const bool polar = mesh.region[p] == RegionTag::polar || (cfg.interfacial_polar && mesh.interfacial[p]);
    beta[p] = polar ? 1 : 0;
  }
  return beta;
}

struct SweepPlan {
  std::vector<std::uint8_t> beta;
  std::vector<std::uint8_t> boundary;  // 1 for boundary nodes
  std::vector<std::uint8_t> frozen;    // origin nodes of polar regions
};

inline SweepPlan make_plan(const Mesh& mesh, const RezoneConfig& cfg) {
  SweepPlan plan;
  plan.beta = node_betas(mesh, cfg);
  plan.boundary.assign(mesh.num_nodes(), 0);
  plan.frozen.assign(mesh.num_nodes(), 0);
  for (int p = 0; p < static_cast<int>(mesh.num_nodes()); ++p) {
    plan.boundary[p] = mesh.is_boundary_node(p) ? 1 : 0;
    // A node that any polar neighbor would see at r = 0 is the pole; it never moves.
    if (mesh.nodes[p].x == 0.0 && mesh.nodes[p].y == 0.0) plan.frozen[p] = 1;
  }
  return plan;
}

/// One Jacobi sweep: every new position is computed from `pos`. Cells that the simultaneous moves
/// fold are repaired by putting their nodes back.
inline std::vector<Vec2> sweep(const Mesh& mesh, std::span<const Vec2> pos, const SweepPlan& plan, BoundaryMode bmode) {
  const int nn = static_cast<int>(mesh.num_nodes());
  std::vector<Vec2> out(pos.begin(), pos.end());
  for (int p = 0; p < nn; ++p) {
    if (plan.frozen[p]) continue;
    if (!plan.boundary[p]) {
      out[p] = smooth_interior_node(mesh, p, pos, plan.beta[p]);
      continue;
    }
    if (bmode == BoundaryMode::off) continue;
    BoundaryInfo info = classify_boundary_node(mesh, p, pos);
    if (bmode == BoundaryMode::straight_only && info.kind == BoundaryKind::curved) continue;
    out[p] = smooth_boundary_node(mesh, p, pos, plan.beta[p], info);
  }
  for (int pass = 0; pass < nn; ++pass) {
    const ValidationReport rep = validate(mesh, out);
    if (rep.ok()) break;
    for (int c : rep.invalid_cells)
      for (int q : mesh.cells[c]) out[q] = pos[q];
    for (const auto& fc : rep.folded_corners)
      for (int q : mesh.cells[fc.first]) out[q] = pos[q];
  }
  return out;
}

/// Smoothed candidate positions after cfg.iterations sweeps.
inline std::vector<Vec2> rezone_positions(const Mesh& mesh, std::span<const Vec2> pos, const RezoneConfig& cfg) {
  cfg.validate();
  const ValidationReport rep = validate(mesh, pos);
  if (!rep.untangled()) throw Error(ErrorKind::invalid_cell, "rezone input mesh is tangled", rep.invalid_cells.front());
  const SweepPlan plan = make_plan(mesh, cfg);
  std::vector<Vec2> cur(pos.begin(), pos.end());
  for (int it = 0; it < cfg.iterations; ++it) cur = sweep(mesh, cur, plan, cfg.boundary);
  return cur;
}

// ---------------------------------------------------------------------------
// Relaxation
// ---------------------------------------------------------------------------

/// max over corners of ||F^T F - I||_F, F the corner deformation gradient from `before` to `after`.
inline double corner_strain(const Mesh& mesh, int p, std::span<const Vec2> before, std::span<const Vec2> after) {
  double worst = 0.0;
  for (int c : mesh.node_cells[p]) {
    const auto& pc = mesh.cells[c];
    const int n = static_cast<int>(pc.size());
    const int i = mesh.local_index(c, p);
    const int pn = pc[(i + 1) % n], pp = pc[(i + n - 1) % n];
    const Mat2 j0 = Mat2::columns(before[pn] - before[p], before[pp] - before[p]);
    const Mat2 j1 = Mat2::columns(after[pn] - after[p], after[pp] - after[p]);
    if (j0.det() == 0.0) continue;
    const Mat2 fgrad = j1 * j0.inverse();
    worst = std::max(worst, (fgrad.transpose() * fgrad - Mat2::identity()).frobenius());
  }
  return worst;
}

/// Relaxation weights per node.
inline std::vector<double> relaxation_weights(const Mesh& mesh, std::span<const Vec2> before_step,
                                              std::span<const Vec2> lagrangian, const RezoneConfig& cfg) {
  std::vector<double> w(mesh.num_nodes(), cfg.omega);
  if (cfg.omega_mode == OmegaMode::fixed) return w;
  for (int p = 0; p < static_cast<int>(mesh.num_nodes()); ++p)
    w[p] = std::min(1.0, cfg.mu * corner_strain(mesh, p, before_step, lagrangian));
  return w;
}

/// X~ = X + omega (X_rez - X).
inline std::vector<Vec2> relax(std::span<const Vec2> lagrangian, std::span<const Vec2> rezoned,
                               std::span<const double> omega) {
  std::vector<Vec2> out(lagrangian.size());
  for (std::size_t p = 0; p < lagrangian.size(); ++p) {
    const double w = omega[p];
    if (!(w >= 0.0 && w <= 1.0)) throw Error(ErrorKind::out_of_range, "relaxation weight outside [0, 1]", static_cast<long>(p));
    out[p] = w == 1.0 ? rezoned[p] : lagrangian[p] + (rezoned[p] - lagrangian[p]) * w;
  }
  return out;
}

}  // namespace ccale::rezone

#endif  // CCALE_REZONE_HPP
