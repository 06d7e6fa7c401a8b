#ifndef CCALE_CASES_HPP
#define CCALE_CASES_HPP

// Test-problem presets and the diagnostics used to judge them.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "ccale/error.hpp"
#include "ccale/lagrange.hpp"
#include "ccale/mesh.hpp"
#include "ccale/polygon.hpp"
#include "ccale/remap.hpp"
#include "ccale/sedov.hpp"
#include "ccale/state.hpp"

namespace ccale::cases {

/// Numeric overrides keyed by parameter name; every preset documents its keys.
struct Params {
  std::map<std::string, double> values;

  double get(const std::string& key, double fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  }
  int count(const std::string& key, int fallback, double scale) const {
    const double n = std::round(get(key, fallback) * scale);
    if (!(n >= 1.0)) throw Error(ErrorKind::config, "cell count for '" + key + "' below one");
    return static_cast<int>(n);
  }
};

struct Case {
  std::string name;
  Mesh mesh;
  HydroState state;
  lagrange::BoundaryDrive drive;
  double t_end = 0.0;
  std::vector<std::string> material_names;
  double initial_mass = 0.0;  // from region integrals, independent of the cell loop
  // Blast-wave extras.
  double e0 = 0.0;
  double domain_radius = 0.0;
  std::vector<double> interface_radii;
};

// ---------------------------------------------------------------------------
// Region helpers
// ---------------------------------------------------------------------------

/// Disc as a convex polygon whose area equals pi r^2.
inline Polygon disc(Vec2 center, double r, int n = 2048) {
  const double t = 2.0 * std::numbers::pi / n;
  const double rv = r * std::sqrt(t / std::sin(t));
  Polygon p;
  for (int i = 0; i < n; ++i) p.push_back(center + unit_from_angle(t * i) * rv);
  return p;
}

inline Polygon rectangle(Vec2 lo, Vec2 hi) { return {lo, {hi.x, lo.y}, hi, {lo.x, hi.y}}; }

/// Moments of the part of a cell inside one material.
using Region = std::function<PolygonMoments(std::span<const Vec2>)>;

inline Region inside(Polygon convex) {
  return [convex = std::move(convex)](std::span<const Vec2> cell) {
    return polygon_moments(clip_convex(cell, convex));
  };
}

inline Region between(Polygon inner, Polygon outer) {
  return [inner = std::move(inner), outer = std::move(outer)](std::span<const Vec2> cell) {
    return polygon_moments(clip_convex(cell, outer)) - polygon_moments(clip_convex(cell, inner));
  };
}

inline Region outside(Polygon convex) {
  return [convex = std::move(convex)](std::span<const Vec2> cell) {
    return polygon_moments(cell) - polygon_moments(clip_convex(cell, convex));
  };
}

struct Fill {
  Region region;
  double rho = 0.0;
  double pressure = 0.0;
};

/// Volume fractions and material centroids from region moments. Fractions below 1e-12 are dropped.
inline void fill_regions(HydroState& st, const Mesh& mesh, std::span<const Fill> fills, Vec2 velocity = {}) {
  const Geometry g = mesh.geometry;
  std::vector<MaterialInit> init(fills.size());
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const Polygon poly = mesh.cell_polygon(c);
    const double v = polygon_moments(poly).volume(g);
    double total = 0.0;
    for (std::size_t k = 0; k < fills.size(); ++k) {
      const PolygonMoments pm = fills[k].region(poly);
      const double a = pm.volume(g) / v;
      init[k] = {};
      if (a > 1e-12 && pm.area() > 0.0) {
        init[k] = {a, fills[k].rho, fills[k].pressure, pm.centroid(g)};
        total += a;
      }
    }
    if (!(total > 0.0)) throw Error(ErrorKind::config, "cell not covered by any material region", c);
    for (auto& m : init) m.alpha /= total;
    set_cell(st, mesh, c, init, velocity);
  }
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

/// Origin-region pressure for the full-ball volume v_or of that region.
inline double sedov_origin_pressure(double gamma, double rho, double e0, double v_or) {
  return (gamma - 1.0) * rho * e0 / v_or;
}

/// Point blast in a quarter disc. Keys: n_theta, n_r, radius, e0, gamma, rho, p0, t_end, r1, r2, r3.
inline Case init_sedov(const Params& prm = {}, double scale = 1.0) {
  Case cs;
  cs.name = "sedov";
  const int nt = prm.count("n_theta", 20, scale);
  const int nr = prm.count("n_r", 25, scale);
  const double radius = prm.get("radius", 1.2);
  const double gamma = prm.get("gamma", 1.4);
  const double rho = prm.get("rho", 1.0);
  const double p0 = prm.get("p0", 1e-6);
  cs.e0 = prm.get("e0", 0.851072);
  cs.t_end = prm.get("t_end", 1.0);
  cs.domain_radius = radius;
  cs.interface_radii = {prm.get("r1", 0.1), prm.get("r2", 0.2), prm.get("r3", 0.3)};

  PolarTags tags;
  tags.outer = BoundaryTag::wall;
  tags.start = BoundaryTag::symmetry;
  tags.end = BoundaryTag::symmetry;
  const auto radii = uniform_radii(nr, radius);
  cs.mesh = make_polar_mesh(nt, radii, 0.0, std::numbers::pi / 2, Geometry::axisymmetric, tags);

  // Three passive interfaces split one gas into four labelled materials.
  const std::size_t nm = cs.interface_radii.size() + 1;
  cs.state = make_state(cs.mesh, std::vector<GasEos>(nm, GasEos{gamma, 0.0}));
  std::vector<Fill> fills;
  std::vector<Polygon> discs;
  for (double r : cs.interface_radii) discs.push_back(disc({0, 0}, r));
  for (std::size_t k = 0; k < nm; ++k) {
    Region reg = k == 0 ? inside(discs[0]) : k + 1 == nm ? outside(discs.back()) : between(discs[k - 1], discs[k]);
    fills.push_back({std::move(reg), rho, p0});
    cs.material_names.push_back("gas" + std::to_string(k));
  }
  fill_regions(cs.state, cs.mesh, fills);

  // Energy source: the cells touching the origin. Their volume is rescaled to the full ball they
  // stand for so that E0 is the energy of the whole sphere.
  const double full_ball = 4.0 * std::numbers::pi;  // quarter disc of revolution -> full sphere
  double v_or = 0.0;
  std::vector<int> origin_cells = cs.mesh.node_cells[0];
  for (int c : origin_cells) v_or += cs.state.cells[c].volume;
  v_or *= full_ball;
  const double p_or = sedov_origin_pressure(gamma, rho, cs.e0, v_or);
  for (int c : origin_cells) {
    std::vector<MaterialInit> init(nm);
    const auto ms = cs.state.mats(c);
    for (std::size_t k = 0; k < nm; ++k)
      if (ms[k].present()) init[k] = {ms[k].alpha, rho, p_or, ms[k].centroid};
    set_cell(cs.state, cs.mesh, c, init, {});
  }
  // The disc is faceted, so the region integral is taken over the polygonal rings.
  for (int c = 0; c < static_cast<int>(cs.mesh.num_cells()); ++c)
    cs.initial_mass += rho * polygon_moments(cs.mesh.cell_polygon(c)).volume(Geometry::axisymmetric);
  return cs;
}

/// Three-state shock/shear problem. Keys: nx, ny, length, height, x_split, y_split, t_end,
/// rho1..rho3, p1..p3, gamma1..gamma3.
inline Case init_triple_point(const Params& prm = {}, double scale = 1.0) {
  Case cs;
  cs.name = "triple_point";
  const int nx = prm.count("nx", 140, scale);
  const int ny = prm.count("ny", 60, scale);
  const double lx = prm.get("length", 7.0), ly = prm.get("height", 3.0);
  const double xs = prm.get("x_split", 1.0), ys = prm.get("y_split", 1.5);
  cs.t_end = prm.get("t_end", 5.0);
  BoxTags tags;
  tags.bottom = BoundaryTag::symmetry;
  cs.mesh = make_cartesian_mesh(nx, ny, {0, 0}, {lx, ly}, Geometry::axisymmetric, tags);
  const std::vector<GasEos> eos{{prm.get("gamma1", 1.5), 0.0}, {prm.get("gamma2", 1.5), 0.0},
                                {prm.get("gamma3", 1.4), 0.0}};
  cs.state = make_state(cs.mesh, eos);
  const double rho1 = prm.get("rho1", 1.0), p1 = prm.get("p1", 1.0);
  const double rho2 = prm.get("rho2", 0.1), p2 = prm.get("p2", 0.125);
  const double rho3 = prm.get("rho3", 1.0), p3 = prm.get("p3", 0.1);
  const std::vector<Fill> fills{{inside(rectangle({0, 0}, {xs, ly})), rho1, p1},
                                {inside(rectangle({xs, ys}, {lx, ly})), rho2, p2},
                                {inside(rectangle({xs, 0}, {lx, ys})), rho3, p3}};
  fill_regions(cs.state, cs.mesh, fills);
  cs.material_names = {"high", "light", "heavy"};
  // Integral of Y over a box [x0,x1] x [y0,y1] is (x1 - x0)(y1^2 - y0^2)/2.
  const auto box = [](double x0, double x1, double y0, double y1) { return (x1 - x0) * (y1 * y1 - y0 * y0) / 2.0; };
  cs.initial_mass = rho1 * box(0, xs, 0, ly) + rho2 * box(xs, lx, ys, ly) + rho3 * box(xs, lx, 0, ys);
  return cs;
}

/// Piston-driven shock in air hitting a helium bubble on the axis.
/// Keys: nx, ny, length, height, x_bubble, r_bubble, rho_air, rho_he, p, gamma_air, gamma_he, u_piston,
/// t_interaction, t_after.
inline Case init_shock_bubble(const Params& prm = {}, double scale = 1.0) {
  Case cs;
  cs.name = "shock_bubble";
  const int nx = prm.count("nx", 520, scale);
  const int ny = prm.count("ny", 72, scale);
  const double lx = prm.get("length", 0.65), ly = prm.get("height", 0.0445);
  const double xb = prm.get("x_bubble", 0.32), rb = prm.get("r_bubble", 0.0225);
  const double rho_air = prm.get("rho_air", 0.182), rho_he = prm.get("rho_he", 1.0), p = prm.get("p", 1e5);
  cs.t_end = prm.get("t_interaction", 657.463e-6) + prm.get("t_after", 600e-6);
  BoxTags tags;
  tags.left = BoundaryTag::wall;
  tags.top = BoundaryTag::symmetry;
  tags.bottom = BoundaryTag::symmetry;
  tags.right = BoundaryTag::piston;
  cs.mesh = make_cartesian_mesh(nx, ny, {0, 0}, {lx, ly}, Geometry::axisymmetric, tags);
  cs.state = make_state(cs.mesh, {{prm.get("gamma_air", 1.4), 0.0}, {prm.get("gamma_he", 1.648), 0.0}});
  const Polygon bubble = disc({xb, 0.0}, rb);
  const std::vector<Fill> fills{{outside(bubble), rho_air, p}, {inside(bubble), rho_he, p}};
  fill_regions(cs.state, cs.mesh, fills);
  cs.drive.piston_velocity = {prm.get("u_piston", -140.312), 0.0};
  cs.material_names = {"air", "helium"};
  // Half disc of revolution: integral of Y over it is 2 r^3 / 3.
  const double vb = 2.0 * rb * rb * rb / 3.0;
  cs.initial_mass = rho_air * (lx * ly * ly / 2.0 - vb) + rho_he * vb;
  return cs;
}

/// Legendre polynomial by the three-term recurrence.
inline double legendre(int l, double x) {
  if (l < 0) throw Error(ErrorKind::out_of_range, "negative Legendre degree");
  if (l == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (int n = 1; n < l; ++n) {
    const double p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

/// Drive pressure on the outer shell; zero once the ramp runs out.
inline double implosion_pressure(double t) {
  if (t <= 0.5) return 10.0;
  return std::max(0.0, 12.0 - 4.0 * t);
}

inline double implosion_damping(double r, double ri, double re) {
  if (r <= ri) return 1.0 - (ri - r) / ri;
  if (r <= re) return 1.0 - (r - ri) / (re - ri);
  return 0.0;
}

/// Ring radii holding equal mass of a uniform density in [r0, r1] (spherical shells).
inline std::vector<double> equal_mass_radii(int n, double r0, double r1) {
  std::vector<double> r(n + 1);
  const double a = r0 * r0 * r0, b = r1 * r1 * r1;
  for (int j = 0; j <= n; ++j) r[j] = std::cbrt(a + (b - a) * j / n);
  r[0] = r0;
  r[n] = r1;
  return r;
}

/// Light ball inside a dense shell driven by an outer pressure. Keys: n_theta, n_inner, n_shell,
/// r_i, r_e, rho_light, rho_heavy, p0, gamma, a0, l, t_end.
inline Case init_implosion(const Params& prm = {}, double scale = 1.0) {
  Case cs;
  cs.name = "implosion";
  const int nt = prm.count("n_theta", 90, scale);
  const int ni = prm.count("n_inner", 30, scale);
  const int ns = prm.count("n_shell", 10, scale);
  const double ri = prm.get("r_i", 10.0), re = prm.get("r_e", 12.0);
  const double rho_l = prm.get("rho_light", 0.05), rho_h = prm.get("rho_heavy", 1.0), p0 = prm.get("p0", 0.1);
  const double gamma = prm.get("gamma", 5.0 / 3.0);
  const double a0 = prm.get("a0", 0.0);
  const int l = static_cast<int>(prm.get("l", 10));
  if (a0 < 0.0 || l < 0) throw Error(ErrorKind::config, "implosion perturbation needs a0 >= 0 and l >= 0");
  cs.t_end = prm.get("t_end", 3.0);

  std::vector<double> radii = equal_mass_radii(ni, 0.0, ri);
  const std::vector<double> shell = equal_mass_radii(ns, ri, re);
  radii.insert(radii.end(), shell.begin() + 1, shell.end());
  PolarTags tags;
  tags.outer = BoundaryTag::pressure;
  cs.mesh = make_polar_mesh(nt, radii, 0.0, std::numbers::pi / 2, Geometry::axisymmetric, tags);

  // Nodes move radially; the angle is measured from the symmetry axis.
  for (auto& x : cs.mesh.nodes) {
    const double r = norm(x);
    if (r == 0.0) continue;
    x = x * (1.0 + a0 * implosion_damping(r, ri, re) * legendre(l, x.x / r));
  }
  const ValidationReport rep = validate(cs.mesh);
  if (!rep.ok()) throw Error(ErrorKind::invalid_cell, "perturbation folds the initial mesh", rep.invalid_cells.front());

  cs.state = make_state(cs.mesh, {{gamma, 0.0}, {gamma, 0.0}});
  for (int c = 0; c < static_cast<int>(cs.mesh.num_cells()); ++c) {
    const bool light = c < ni * nt;  // cells are numbered ring by ring
    set_pure_cell(cs.state, cs.mesh, c, light ? 0 : 1, light ? rho_l : rho_h, p0, {});
  }
  cs.drive.pressure = implosion_pressure;
  cs.material_names = {"light", "heavy"};
  double vl = 0.0, vh = 0.0;
  for (int c = 0; c < static_cast<int>(cs.mesh.num_cells()); ++c)
    (c < ni * nt ? vl : vh) += polygon_moments(cs.mesh.cell_polygon(c)).volume(Geometry::axisymmetric);
  cs.initial_mass = rho_l * vl + rho_h * vh;
  return cs;
}

inline const std::vector<std::string>& case_names() {
  static const std::vector<std::string> names{"sedov", "triple_point", "shock_bubble", "implosion"};
  return names;
}

inline Case make_case(const std::string& name, const Params& prm = {}, double scale = 1.0) {
  if (!(scale > 0.0)) throw Error(ErrorKind::config, "resolution scale must be positive");
  if (name == "sedov") return init_sedov(prm, scale);
  if (name == "triple_point") return init_triple_point(prm, scale);
  if (name == "shock_bubble") return init_shock_bubble(prm, scale);
  if (name == "implosion") return init_implosion(prm, scale);
  throw Error(ErrorKind::config, "unknown case '" + name + "'");
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

struct ProfilePoint {
  double r = 0.0;
  double rho = 0.0;
  double pressure = 0.0;
  double radial_velocity = 0.0;
  double volume = 0.0;
};

/// One entry per cell, keyed by the radius of the cell centroid, sorted by radius.
inline std::vector<ProfilePoint> radial_profile(const Mesh& mesh, const HydroState& st, Vec2 center = {}) {
  std::vector<ProfilePoint> out;
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const Vec2 x = cell_measures(mesh, c).centroid - center;
    const double r = norm(x);
    const CellState& cs = st.cells[c];
    out.push_back({r, cs.rho, cs.pressure, r > 0.0 ? dot(cs.velocity, x) / r : 0.0, cs.volume});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.r < b.r; });
  return out;
}

/// Volume-weighted averages over equal-width bins in [0, r_max]; empty bins are skipped.
inline std::vector<ProfilePoint> binned_profile(std::span<const ProfilePoint> pts, int bins, double r_max) {
  std::vector<ProfilePoint> acc(bins);
  for (const auto& p : pts) {
    const int b = std::clamp(static_cast<int>(p.r / r_max * bins), 0, bins - 1);
    acc[b].rho += p.rho * p.volume;
    acc[b].pressure += p.pressure * p.volume;
    acc[b].radial_velocity += p.radial_velocity * p.volume;
    acc[b].volume += p.volume;
  }
  std::vector<ProfilePoint> out;
  for (int b = 0; b < bins; ++b) {
    if (!(acc[b].volume > 0.0)) continue;
    ProfilePoint q = acc[b];
    q.r = (b + 0.5) * r_max / bins;
    q.rho /= q.volume;
    q.pressure /= q.volume;
    q.radial_velocity /= q.volume;
    out.push_back(q);
  }
  return out;
}

/// Least-squares density gradient over the node-neighbor stencil.
inline std::vector<Vec2> density_gradient(const Mesh& mesh, const HydroState& st) {
  const int nc = static_cast<int>(mesh.num_cells());
  std::vector<Vec2> centers(nc);
  for (int c = 0; c < nc; ++c) centers[c] = cell_measures(mesh, c).centroid;
  std::vector<Vec2> out(nc);
  std::vector<Vec2> xs;
  std::vector<double> vs;
  for (int c = 0; c < nc; ++c) {
    xs.clear();
    vs.clear();
    for (int d : mesh.cell_stencil[c]) {
      if (d == c) continue;
      xs.push_back(centers[d]);
      vs.push_back(st.cells[d].rho);
    }
    out[c] = remap::least_squares_gradient(centers[c], st.cells[c].rho, xs, vs);
  }
  return out;
}

/// Shading exp(-k |grad rho| / max |grad rho|); identically one for a uniform field.
inline std::vector<double> schlieren(const Mesh& mesh, const HydroState& st, double k = 15.0) {
  const std::vector<Vec2> g = density_gradient(mesh, st);
  double gmax = 0.0;
  for (const auto& v : g) gmax = std::max(gmax, norm(v));
  std::vector<double> out(g.size(), 1.0);
  if (gmax > 0.0)
    for (std::size_t c = 0; c < g.size(); ++c) out[c] = std::exp(-k * norm(g[c]) / gmax);
  return out;
}

/// Volume-weighted L1 density error against the self-similar blast solution.
inline double sedov_l1_error(const Mesh& mesh, const HydroState& st, const sedov::Solution& sol, double t) {
  double err = 0.0, vol = 0.0;
  for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
    const CellMeasures cm = cell_measures(mesh, c);
    err += std::abs(st.cells[c].rho - sol.at(norm(cm.centroid), t).rho) * cm.volume;
    vol += cm.volume;
  }
  return err / vol;
}

/// Centroid radius of the densest cell.
inline double peak_density_radius(const Mesh& mesh, const HydroState& st) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(mesh.num_cells()); ++c)
    if (st.cells[c].rho > st.cells[best].rho) best = c;
  return norm(cell_measures(mesh, best).centroid);
}

/// Radii of spheres whose volume matches the volume of materials 0..j, for each j < nmat - 1,
/// in a quarter disc of revolution of radius `domain_radius`.
inline std::vector<double> equivalent_interface_radii(const HydroState& st, double domain_radius) {
  const std::size_t nm = st.num_materials();
  std::vector<double> vk(nm, 0.0);
  double total = 0.0;
  for (int c = 0; c < static_cast<int>(st.num_cells()); ++c) {
    const auto ms = st.mats(c);
    for (std::size_t k = 0; k < nm; ++k)
      if (ms[k].present()) vk[k] += ms[k].alpha * st.cells[c].volume;
    total += st.cells[c].volume;
  }
  std::vector<double> out;
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < nm; ++k) {
    acc += vk[k];
    out.push_back(domain_radius * std::cbrt(acc / total));
  }
  return out;
}

/// Midpoint radii of the reconstructed interface segments of `material`: the piece edges that do
/// not lie on their cell's boundary.
inline std::vector<double> interface_radii(const Mesh& mesh, std::span<const std::vector<Polygon>> pieces,
                                           std::size_t material, Vec2 center = {}) {
  std::vector<double> out;
  for (int c = 0; c < static_cast<int>(pieces.size()); ++c) {
    if (pieces[c].size() <= material || pieces[c][material].size() < 3) continue;
    const Polygon cell = mesh.cell_polygon(c);
    double h = 0.0;
    for (std::size_t i = 0; i < cell.size(); ++i) h = std::max(h, norm(cell[(i + 1) % cell.size()] - cell[i]));
    const Polygon& pc = pieces[c][material];
    for (std::size_t i = 0; i < pc.size(); ++i) {
      const Vec2 a = pc[i], b = pc[(i + 1) % pc.size()];
      if (norm(b - a) <= 1e-12 * h) continue;
      const Vec2 mid = 0.5 * (a + b);
      bool on_boundary = false;
      for (std::size_t j = 0; j < cell.size() && !on_boundary; ++j) {
        const Vec2 p = cell[j], q = cell[(j + 1) % cell.size()];
        const double len = norm(q - p);
        on_boundary = std::abs(cross(q - p, mid - p)) <= 1e-10 * h * len && dot(mid - p, q - p) >= -1e-10 * h * len &&
                      dot(mid - q, p - q) >= -1e-10 * h * len;
      }
      if (!on_boundary) out.push_back(norm(mid - center));
    }
  }
  return out;
}

/// Standard deviation over mean.
inline double relative_spread(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(v.size())) / mean;
}

}  // namespace ccale::cases

#endif  // CCALE_CASES_HPP
