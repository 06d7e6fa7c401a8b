#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ccale/remap.hpp"
#include "oracles.hpp"

using namespace ccale;
using namespace ccale::remap;

namespace {

constexpr double x_interface = 0.37;

// Box grid shifted off the axis, interior nodes jittered by `jitter` cell sizes.
Mesh jittered_box(std::mt19937& rng, int n, double jitter, Geometry g) {
  Mesh m = make_cartesian_mesh(n, n, {0, 0.2}, {1, 1.2}, g);
  std::uniform_real_distribution<double> u(-jitter / n, jitter / n);
  for (int p = 0; p < static_cast<int>(m.num_nodes()); ++p)
    if (!m.is_boundary_node(p)) m.nodes[p] += Vec2{u(rng), u(rng)};
  return m;
}

std::vector<Vec2> displaced(std::mt19937& rng, const Mesh& m, double amount) {
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m.num_cells()))));
  std::uniform_real_distribution<double> u(-amount / n, amount / n);
  std::vector<Vec2> out = m.nodes;
  for (int p = 0; p < static_cast<int>(m.num_nodes()); ++p)
    if (!m.is_boundary_node(p)) out[p] += Vec2{u(rng), u(rng)};
  return out;
}

std::vector<GasEos> two_gases() { return {{1.4, 0.0}, {1.67, 0.0}}; }

// Material 0 left of x = x_interface, material 1 right of it. Density, pressure and velocity come
// from the supplied functions evaluated at the exact material centroids.
template <class Rho, class Vel>
HydroState two_material_state(const Mesh& m, Rho rho_of, Vel vel_of, double split = x_interface) {
  HydroState st = make_state(m, two_gases());
  for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) {
    const Polygon poly = m.cell_polygon(c);
    const Polygon left = clip_halfplane(poly, {1, 0}, split);
    const Polygon right = clip_halfplane(poly, {-1, 0}, -split);
    const PolygonMoments pl = polygon_moments(left), pr = polygon_moments(right), pc = polygon_moments(poly);
    const double v = pc.volume(m.geometry);
    std::vector<MaterialInit> init(2);
    const double al = pl.volume(m.geometry) / v;
    if (al > 1e-12 && al < 1 - 1e-12) {
      init[0] = {al, rho_of(0, pl.centroid(m.geometry)), 1.0, pl.centroid(m.geometry)};
      init[1] = {1 - al, rho_of(1, pr.centroid(m.geometry)), 0.5, pr.centroid(m.geometry)};
    } else {
      const int k = al >= 0.5 ? 0 : 1;
      init[k] = {1.0, rho_of(k, pc.centroid(m.geometry)), k == 0 ? 1.0 : 0.5, {}};
    }
    set_cell(st, m, c, init, vel_of(pc.centroid(m.geometry)));
  }
  return st;
}

HydroState single_material_state(const Mesh& m, double rho, Vec2 u) {
  HydroState st = make_state(m, {GasEos{1.4, 0.0}});
  for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) set_pure_cell(st, m, c, 0, rho, 2.0, u);
  return st;
}

std::vector<std::vector<Polygon>> exact_pieces(const Mesh& m, const HydroState& st, double split = x_interface) {
  std::vector<std::vector<Polygon>> out(m.num_cells());
  for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) {
    if (!st.is_mixed(c)) continue;
    const Polygon poly = m.cell_polygon(c);
    out[c] = {clip_halfplane(poly, {1, 0}, split), clip_halfplane(poly, {-1, 0}, -split)};
  }
  return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(MomentIntegrate, Examples) {
  const Polygon sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  EXPECT_NEAR(moment_integrate(sq, 0, 0), 1.0, 1e-15);
  EXPECT_NEAR(moment_integrate(sq, 1, 0), 0.5, 1e-15);
  EXPECT_NEAR(moment_integrate(sq, 2, 1), 1.0 / 6.0, 1e-15);
}

TEST(MomentIntegrate, MatchesQuadratureOracle) {
  std::mt19937 rng(101);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto poly = oracle::random_star(rng, 3 + t % 9, {0.3, 1.1}, 0.2, 1.0);
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; a + b <= 3; ++b) {
        const double ref = oracle::star_integral(poly, {0.3, 1.1}, [&](Vec2 x) { return std::pow(x.x, a) * std::pow(x.y, b); }, 1);
        const double got = moment_integrate(poly, a, b);
        worst = std::max(worst, std::abs(got - ref) / std::max(1.0, std::abs(ref)));
      }
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(PolygonIntersect, Examples) {
  const Polygon a{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const Polygon b{{0.5, 0}, {1.5, 0}, {1.5, 1}, {0.5, 1}};
  const Polygon far{{3, 3}, {4, 3}, {4, 4}};
  EXPECT_NEAR(intersection_moments(a, a).area(), 1.0, 1e-15);
  EXPECT_NEAR(intersection_moments(a, b).area(), 0.5, 1e-15);
  EXPECT_TRUE(polygon_intersect(a, far).empty());
}

TEST(Classify, SingleMaterialIsAllSweptFaces) {
  const Mesh m = make_cartesian_mesh(5, 5, {0, 0}, {1, 1}, Geometry::axisymmetric);
  const HydroState st = single_material_state(m, 1.0, {});
  const Classification cl = classify(m, st);
  EXPECT_EQ(cl.count_mcib(), 0u);
  EXPECT_EQ(cl.count_pcsf(), m.num_cells());
}

TEST(Classify, OneMixedCell) {
  const Mesh m = make_cartesian_mesh(5, 5, {0, 0}, {1, 1}, Geometry::planar);
  HydroState st = make_state(m, two_gases());
  for (int c = 0; c < 25; ++c) set_pure_cell(st, m, c, 0, 1.0, 1.0, {});
  const int mid = 12;
  const std::vector<MaterialInit> init{{0.5, 1.0, 1.0, {0.45, 0.5}}, {0.5, 0.1, 1.0, {0.55, 0.5}}};
  set_cell(st, m, mid, init, {});
  const Classification cl = classify(m, st);
  int mixed_nodes = 0;
  for (auto v : cl.mixed_node) mixed_nodes += v;
  EXPECT_EQ(mixed_nodes, 4);
  EXPECT_EQ(cl.count_mcib(), 9u);
  for (int c = 0; c < 25; ++c) {
    const int i = c % 5, j = c / 5;
    EXPECT_EQ(cl.mcib_cell[c], (std::abs(i - 2) <= 1 && std::abs(j - 2) <= 1) ? 1 : 0);
  }
  EXPECT_EQ(cl.pcsf_cell[mid], 0);
  EXPECT_EQ(cl.count_pcsf(), 24u);
}

TEST(Classify, AllMixedIsAllIntersections) {
  const Mesh m = make_cartesian_mesh(4, 4, {0, 0}, {1, 1}, Geometry::planar);
  HydroState st = make_state(m, two_gases());
  for (int c = 0; c < 16; ++c) {
    const Vec2 x = cell_measures(m, c).centroid;
    const std::vector<MaterialInit> init{{0.5, 1.0, 1.0, x}, {0.5, 0.1, 1.0, x}};
    set_cell(st, m, c, init, {});
  }
  const Classification cl = classify(m, st);
  EXPECT_EQ(cl.count_mcib(), 16u);
  EXPECT_EQ(cl.count_pcsf(), 0u);
}

TEST(Gradient, ConstantAndLinear) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const Vec2 x0{u(rng), u(rng)};
    std::vector<Vec2> xs;
    std::vector<double> flat, lin;
    for (int i = 0; i < 8; ++i) {
      xs.push_back(x0 + Vec2{u(rng), u(rng)} * 0.1);
      flat.push_back(3.0);
      lin.push_back(2 * xs.back().x - xs.back().y);
    }
    const Vec2 g0 = least_squares_gradient(x0, 3.0, xs, flat);
    EXPECT_EQ(g0.x, 0.0);
    EXPECT_EQ(g0.y, 0.0);
    const Vec2 g1 = least_squares_gradient(x0, 2 * x0.x - x0.y, xs, lin);
    EXPECT_NEAR(g1.x, 2.0, 1e-12);
    EXPECT_NEAR(g1.y, -1.0, 1e-12);
  }
  const std::vector<Vec2> collinear{{1, 0}, {2, 0}, {-1, 0}};
  const std::vector<double> v{1, 2, 3};
  const Vec2 gz = least_squares_gradient({0, 0}, 0.0, collinear, v);
  EXPECT_EQ(gz.x, 0.0);
  EXPECT_EQ(gz.y, 0.0);
}

TEST(Gradient, LimiterKeepsRange) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const Polygon cell{{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};
    const Vec2 grad{u(rng) * 5, u(rng) * 5};
    const double v0 = u(rng), lo = v0 - std::abs(u(rng)), hi = v0 + std::abs(u(rng));
    const double phi = barth_jespersen(cell, {0, 0}, v0, grad, lo, hi);
    for (const auto& x : cell) {
      const double r = v0 + phi * dot(grad, x);
      EXPECT_GE(r, lo - 1e-14);
      EXPECT_LE(r, hi + 1e-14);
    }
  }
}

TEST(SweptFace, BowTieSplitsIntoOppositeLobes) {
  const auto regions = swept_regions({0, 0}, {1, 0}, {0, 0.1}, {1, -0.1}, true);
  ASSERT_EQ(regions.size(), 2u);
  const double a0 = polygon_moments(regions[0]).area(), a1 = polygon_moments(regions[1]).area();
  EXPECT_LT(a0 * a1, 0.0);
  EXPECT_NEAR(a0 + a1, 0.0, 1e-16);
  EXPECT_THROW(swept_regions({0, 0}, {1, 0}, {1.5, 0.1}, {-0.5, 0.1}, true), Error);
}

TEST(Remap, ZeroDisplacementIsBitExactOnSweptFaces) {
  std::mt19937 rng(13);
  const Mesh m = jittered_box(rng, 8, 0.2, Geometry::axisymmetric);
  const HydroState st = single_material_state(m, 1.3, {0.2, -0.4});
  const Result r = hybrid_remap(m, m.nodes, m.nodes, st, {});
  EXPECT_EQ(r.diagnostics.mcib_cells, 0u);
  for (int c = 0; c < 64; ++c) {
    EXPECT_EQ(r.state.cells[c].rho, st.cells[c].rho);
    EXPECT_EQ(r.state.cells[c].energy, st.cells[c].energy);
    EXPECT_EQ(r.state.cells[c].velocity, st.cells[c].velocity);
  }
}

TEST(Remap, IdentityIsExactOnBothPaths) {
  std::mt19937 rng(14);
  const Mesh m = jittered_box(rng, 10, 0.2, Geometry::axisymmetric);
  const HydroState st = two_material_state(
      m, [](int k, Vec2 x) { return (k == 0 ? 1.0 : 0.125) * (1 + 0.3 * x.x); }, [](Vec2 x) { return Vec2{x.y, -x.x}; });
  const auto pieces = exact_pieces(m, st);
  for (bool hybrid : {true, false}) {
    Options opt;
    opt.hybrid = hybrid;
    const Result r = hybrid_remap(m, m.nodes, m.nodes, st, pieces, opt);
    double worst = 0.0;
    for (int c = 0; c < 100; ++c) {
      const auto& a = r.state.cells[c];
      const auto& b = st.cells[c];
      worst = std::max({worst, rel(a.rho, b.rho), rel(a.energy, b.energy), norm(a.velocity - b.velocity) / norm(b.velocity)});
      for (int k = 0; k < 2; ++k) {
        const auto& ma = r.state.mats(c)[k];
        const auto& mb = st.mats(c)[k];
        EXPECT_EQ(ma.present(), mb.present());
        if (!mb.present()) continue;
        worst = std::max({worst, std::abs(ma.alpha - mb.alpha), rel(ma.mass, mb.mass), rel(ma.eps, mb.eps)});
      }
    }
    EXPECT_LT(worst, 1e-12) << "hybrid " << hybrid;
  }
}

TEST(Remap, ConstantFieldsArePreserved) {
  std::mt19937 rng(15);
  for (int t = 0; t < 10; ++t) {
    const Mesh m = jittered_box(rng, 10, 0.2, t % 2 ? Geometry::planar : Geometry::axisymmetric);
    const HydroState st = two_material_state(
        m, [](int k, Vec2) { return k == 0 ? 1.0 : 0.125; }, [](Vec2) { return Vec2{0.7, -0.2}; });
    const auto pieces = exact_pieces(m, st);
    const auto to = displaced(rng, m, 0.25);
    for (bool hybrid : {true, false}) {
      Options opt;
      opt.hybrid = hybrid;
      const Result r = hybrid_remap(m, m.nodes, to, st, pieces, opt);
      for (int c = 0; c < 100; ++c) {
        EXPECT_LT(norm(r.state.cells[c].velocity - Vec2{0.7, -0.2}), 1e-12);
        for (int k = 0; k < 2; ++k) {
          const auto& mk = r.state.mats(c)[k];
          if (!mk.present()) continue;
          EXPECT_NEAR(mk.rho, k == 0 ? 1.0 : 0.125, 1e-12);
          EXPECT_NEAR(mk.pressure, k == 0 ? 1.0 : 0.5, 1e-12);
        }
      }
    }
  }
}

TEST(Remap, SingleMaterialUniformFlowIsInvariant) {
  std::mt19937 rng(16);
  const Mesh m = jittered_box(rng, 12, 0.2, Geometry::axisymmetric);
  const HydroState st = single_material_state(m, 0.9, {1.0, 0.5});
  const Result r = hybrid_remap(m, m.nodes, displaced(rng, m, 0.3), st, {});
  for (const auto& c : r.state.cells) {
    EXPECT_NEAR(c.rho, 0.9, 1e-12);
    EXPECT_NEAR(c.pressure, 2.0, 1e-12);
    EXPECT_LT(norm(c.velocity - Vec2{1.0, 0.5}), 1e-12);
  }
}

TEST(Remap, IntersectionPreservesLinearDensity) {
  std::mt19937 rng(17);
  const auto rho = [](Vec2 x) { return 1.0 + 0.5 * x.x - 0.3 * x.y; };
  for (Geometry g : {Geometry::planar, Geometry::axisymmetric}) {
    const Mesh m = jittered_box(rng, 10, 0.2, g);
    const HydroState st = single_material_state(m, 1.0, {});
    HydroState lin = st;
    for (int c = 0; c < 100; ++c) set_pure_cell(lin, m, c, 0, rho(cell_measures(m, c).centroid), 1.0, {});
    const auto to = displaced(rng, m, 0.3);
    Options opt;
    opt.limiter = false;
    for (bool hybrid : {false, true}) {
      opt.hybrid = hybrid;
      const Result r = hybrid_remap(m, m.nodes, to, lin, {}, opt);
      double worst = 0.0;
      for (int c = 0; c < 100; ++c) {
        // Cells on the boundary have one-sided stencils but the field is still exactly linear.
        const Vec2 xc = polygon_moments(m.cell_polygon(c, to)).centroid(g);
        worst = std::max(worst, std::abs(r.state.cells[c].rho - rho(xc)));
      }
      EXPECT_LT(worst, 1e-10) << "hybrid " << hybrid;
    }
  }
}

TEST(Remap, SweptFacesAgreeWithIntersectionsOnLinearData) {
  std::mt19937 rng(18);
  const auto rho = [](Vec2 x) { return 2.0 - 0.4 * x.x + 0.7 * x.y; };
  const Mesh m = jittered_box(rng, 10, 0.2, Geometry::axisymmetric);
  HydroState st = single_material_state(m, 1.0, {});
  for (int c = 0; c < 100; ++c) set_pure_cell(st, m, c, 0, rho(cell_measures(m, c).centroid), 1.0, {});
  const auto to = displaced(rng, m, 0.3);
  Options opt;
  opt.limiter = false;
  opt.hybrid = true;
  const Result a = hybrid_remap(m, m.nodes, to, st, {}, opt);
  opt.hybrid = false;
  const Result b = hybrid_remap(m, m.nodes, to, st, {}, opt);
  EXPECT_GT(a.diagnostics.pcsf_cells, 0u);
  EXPECT_EQ(a.diagnostics.mcib_cells, 0u);
  EXPECT_EQ(b.diagnostics.mcib_cells, 100u);
  for (int c = 0; c < 100; ++c) EXPECT_NEAR(a.state.cells[c].rho, b.state.cells[c].rho, 1e-10);
}

TEST(Remap, ConservationOnRandomRezones) {
  std::mt19937 rng(19);
  for (int t = 0; t < 12; ++t) {
    const Geometry g = t % 3 ? Geometry::axisymmetric : Geometry::planar;
    const Mesh m = jittered_box(rng, 12, 0.25, g);
    const HydroState st = two_material_state(
        m, [](int k, Vec2 x) { return (k == 0 ? 1.0 : 0.2) * (1.0 + 0.5 * std::sin(6 * x.y)); },
        [](Vec2 x) { return Vec2{std::cos(4 * x.y), x.x * x.x}; }, 0.31 + 0.02 * t);
    const auto pieces = exact_pieces(m, st, 0.31 + 0.02 * t);
    const auto to = displaced(rng, m, 0.3);
    for (bool hybrid : {true, false}) {
      Options opt;
      opt.hybrid = hybrid;
      const Result r = hybrid_remap(m, m.nodes, to, st, pieces, opt);
      const Diagnostics& d = r.diagnostics;
      EXPECT_LT(d.mass_delta(), 1e-11);
      EXPECT_LT(d.energy_delta(), 1e-11);
      EXPECT_LT(d.momentum_delta(norm(d.before.momentum)), 1e-11);
      EXPECT_LT(rel(r.state.total_mass(), st.total_mass()), 1e-11);
      EXPECT_LT(rel(r.state.total_energy(), st.total_energy()), 1e-11);
      if (hybrid) {
        EXPECT_GT(d.pcsf_cells, 0u);
        EXPECT_GT(d.mcib_cells, 0u);
      }
      for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) {
        double s = 0.0;
        for (const auto& mk : r.state.mats(c)) s += mk.alpha;
        EXPECT_NEAR(s, 1.0, 1e-10);
      }
    }
  }
}

TEST(Remap, MofPiecesAndSlidingAxisNodes) {
  std::mt19937 rng(20);
  const Mesh m = jittered_box(rng, 10, 0.2, Geometry::axisymmetric);
  const HydroState st = two_material_state(
      m, [](int k, Vec2) { return k == 0 ? 1.0 : 0.3; }, [](Vec2) { return Vec2{0.1, 0.0}; });
  const auto pieces = reconstruct_interfaces(m, m.nodes, st, mof::CentroidMode::axisymmetric);
  auto to = displaced(rng, m, 0.25);
  // Bottom and top rows slide along their lines.
  for (int i = 1; i < 10; ++i) {
    to[i].x += 0.02;
    to[110 + i].x -= 0.02;
  }
  const Result r = hybrid_remap(m, m.nodes, to, st, pieces);
  EXPECT_LT(r.diagnostics.mass_delta(), 1e-11);
  EXPECT_LT(r.diagnostics.energy_delta(), 1e-11);
}

TEST(Remap, CoverageErrorOnLargeDisplacement) {
  const Mesh m = make_cartesian_mesh(6, 6, {0, 0}, {1, 1}, Geometry::planar);
  HydroState st = make_state(m, two_gases());
  for (int c = 0; c < 36; ++c) {
    const Vec2 x = cell_measures(m, c).centroid;
    const std::vector<MaterialInit> init{{0.5, 1.0, 1.0, x}, {0.5, 0.1, 1.0, x}};
    set_cell(st, m, c, init, {});
  }
  std::vector<std::vector<Polygon>> pieces(36);
  for (int c = 0; c < 36; ++c) {
    const Polygon poly = m.cell_polygon(c);
    const Vec2 x = cell_measures(m, c).centroid;
    pieces[c] = {clip_halfplane(poly, {1, 0}, x.x), clip_halfplane(poly, {-1, 0}, -x.x)};
  }
  std::vector<Vec2> to = m.nodes;
  to[24].x += 0.15;  // node (3, 3), within its own patch: fine
  EXPECT_NO_THROW(hybrid_remap(m, m.nodes, to, st, pieces));
  to[24].x += 0.2;  // beyond the neighbor ring: the new cells fold
  EXPECT_THROW(hybrid_remap(m, m.nodes, to, st, pieces), Error);
}
