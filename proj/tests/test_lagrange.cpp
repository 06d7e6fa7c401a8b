#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ccale/lagrange.hpp"
#include "ccale/state.hpp"

using namespace ccale;
using namespace ccale::lagrange;

namespace {

Mesh perturbed_box(std::mt19937& rng, int n, Geometry g, BoxTags tags = {}) {
  Mesh m = make_cartesian_mesh(n, n, {0, 0.5}, {1, 1.5}, g, tags);
  std::uniform_real_distribution<double> u(-0.2 / n, 0.2 / n);
  for (std::size_t p = 0; p < m.num_nodes(); ++p)
    if (!m.is_boundary_node(static_cast<int>(p))) m.nodes[p] += Vec2{u(rng), u(rng)};
  return m;
}

HydroState random_state(std::mt19937& rng, const Mesh& m) {
  HydroState st = make_state(m, {{1.4}});
  std::uniform_real_distribution<double> u(0.5, 2.0), v(-0.5, 0.5);
  for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) set_pure_cell(st, m, c, 0, u(rng), u(rng), {v(rng), v(rng)});
  return st;
}

HydroState uniform_state(const Mesh& m, double rho, double p, Vec2 u) {
  HydroState st = make_state(m, {{1.4}});
  for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) set_pure_cell(st, m, c, 0, rho, p, u);
  return st;
}

}  // namespace

TEST(CornerMatrix, Examples) {
  const CornerGeometry g = corner_geometry({0, 0}, {1, 0}, {1, 1});
  const Mat2 z = corner_matrix(g, 0.0);
  EXPECT_EQ(z.a, 0.0);
  EXPECT_EQ(z.d, 0.0);
  const Mat2 m = corner_matrix(g, 2.0);
  EXPECT_DOUBLE_EQ(m.a, 1.0);
  EXPECT_DOUBLE_EQ(m.d, 1.0);
  EXPECT_DOUBLE_EQ(m.b, 0.0);
}

TEST(CornerMatrix, SymmetricPositiveSemidefinite) {
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
    const Mat2 m = corner_matrix(corner_geometry(a, b, c), std::abs(u(rng)));
    EXPECT_EQ(m.b, m.c);
    EXPECT_GE(symmetric_eigenvalues(m)[0], -1e-15);
  }
}

TEST(CornerFlux, Examples) {
  const CornerGeometry g = corner_geometry({0, 0}, {1, 0}, {1, 1});
  CellState cs;
  cs.pressure = 3.0;
  cs.velocity = {0.2, -0.1};
  const Mat2 m = corner_matrix(g, 1.7);
  const Vec2 f = corner_flux(cs, g, m, cs.velocity);
  EXPECT_DOUBLE_EQ(f.x, 1.5);
  EXPECT_DOUBLE_EQ(f.y, -1.5);
  cs.pressure = 0.0;
  const Vec2 f0 = corner_flux(cs, g, m, cs.velocity);
  EXPECT_EQ(f0.x, 0.0);
  EXPECT_EQ(f0.y, 0.0);
}

TEST(SolveNode, UniformPressureAtRest) {
  std::mt19937 rng(59);
  const Mesh m = perturbed_box(rng, 5, Geometry::axisymmetric);
  const HydroState st = uniform_state(m, 1.0, 2.0, {});
  const NodalSolution ns = solve_nodes(m, st, {}, 0.0);
  for (const auto& u : ns.velocity) EXPECT_LT(norm(u), 1e-14);
}

TEST(SolveNode, MatchedPressureBoundaryAtRest) {
  std::mt19937 rng(60);
  const BoxTags all{BoundaryTag::pressure, BoundaryTag::pressure, BoundaryTag::pressure, BoundaryTag::pressure};
  const Mesh m = perturbed_box(rng, 5, Geometry::axisymmetric, all);
  const HydroState st = uniform_state(m, 1.0, 2.0, {});
  BoundaryDrive drive;
  drive.pressure = [](double) { return 2.0; };
  const NodalSolution ns = solve_nodes(m, st, drive, 0.0);
  for (const auto& u : ns.velocity) EXPECT_LT(norm(u), 1e-13);
}

TEST(SolveNode, ExternalPressurePushesInward) {
  std::mt19937 rng(62);
  const BoxTags all{BoundaryTag::pressure, BoundaryTag::pressure, BoundaryTag::pressure, BoundaryTag::pressure};
  const Mesh m = perturbed_box(rng, 5, Geometry::planar, all);
  const HydroState st = uniform_state(m, 1.0, 2.0, {});
  BoundaryDrive drive;
  drive.pressure = [](double) { return 5.0; };
  const NodalSolution ns = solve_nodes(m, st, drive, 0.0);
  for (int p = 0; p < static_cast<int>(m.num_nodes()); ++p)
    if (m.is_boundary_node(p)) EXPECT_LT(dot(ns.velocity[p], m.nodes[p] - Vec2{0.5, 1.0}), 0.0) << p;
}

TEST(SolveNode, GalileanConsistency) {
  std::mt19937 rng(61);
  Mesh m = perturbed_box(rng, 5, Geometry::planar,
                         {BoundaryTag::none, BoundaryTag::none, BoundaryTag::none, BoundaryTag::none});
  // Free boundaries still feel the interior system only; use interior nodes.
  const Vec2 w{0.3, -0.7};
  const HydroState st = uniform_state(m, 1.0, 2.0, w);
  const NodalSolution ns = solve_nodes(m, st, {}, 0.0);
  for (int p = 0; p < static_cast<int>(m.num_nodes()); ++p) {
    if (m.is_boundary_node(p)) continue;
    EXPECT_NEAR(ns.velocity[p].x, w.x, 1e-14);
    EXPECT_NEAR(ns.velocity[p].y, w.y, 1e-14);
  }
}

TEST(SolveNode, InteriorNodeFluxesBalance) {
  std::mt19937 rng(67);
  for (int trial = 0; trial < 20; ++trial) {
    const Mesh m = perturbed_box(rng, 6, Geometry::axisymmetric);
    const HydroState st = random_state(rng, m);
    const NodalSolution ns = solve_nodes(m, st, {}, 0.0);
    std::vector<Vec2> sum(m.num_nodes());
    std::vector<double> mag(m.num_nodes(), 0.0);
    for (int c = 0; c < static_cast<int>(m.num_cells()); ++c)
      for (int i = 0; i < 4; ++i) {
        const Vec2 f = ns.flux[m.corner_offset[c] + i];
        sum[m.cells[c][i]] += f;
        mag[m.cells[c][i]] += norm(f);
      }
    for (int p = 0; p < static_cast<int>(m.num_nodes()); ++p)
      if (!m.is_boundary_node(p)) {
        EXPECT_LT(norm(sum[p]), 1e-11 * mag[p]);
      }
  }
}

TEST(SolveNode, RadialOnPolarPatch) {
  const double radii[] = {0.5, 0.7, 0.9};
  const Mesh m = make_polar_mesh(2, radii, 0.2, 0.6, Geometry::axisymmetric);
  HydroState st = make_state(m, {{1.4}});
  // Two rings of two cells: inner ring compressed and expanding.
  for (int c = 0; c < 4; ++c) {
    const bool inner = c < 2;
    const CellMeasures cm = cell_measures(m, c);
    const Vec2 dir = cm.planar_centroid / norm(cm.planar_centroid);
    set_pure_cell(st, m, c, 0, inner ? 2.0 : 1.0, inner ? 3.0 : 1.0, dir * (inner ? 0.4 : 0.1));
  }
  // The node shared by all four cells sits on the middle ring, on the bisector.
  const NodalSolution ns = solve_nodes(m, st, {}, 0.0);
  int mid = -1;
  for (int p = 0; p < static_cast<int>(m.num_nodes()); ++p)
    if (m.node_cells[p].size() == 4) mid = p;
  ASSERT_GE(mid, 0);
  const Vec2 u = ns.velocity[mid];
  EXPECT_GT(norm(u), 0.0);
  EXPECT_LT(std::abs(cross(u, m.nodes[mid])), 1e-14 * norm(u) * norm(m.nodes[mid]));
}

TEST(Divergence, Examples) {
  Mesh m = make_cartesian_mesh(1, 1, {0, 0}, {1, 1}, Geometry::planar);
  std::vector<Vec2> trans(m.num_nodes(), Vec2{0.4, -2.0});
  EXPECT_NEAR(discrete_divergence(m, 0, m.nodes, trans), 0.0, 1e-15);
  EXPECT_NEAR(gcl_divergence(m, 0, m.nodes, trans), 0.0, 1e-15);
  std::vector<Vec2> lin(m.nodes.begin(), m.nodes.end());
  EXPECT_NEAR(discrete_divergence(m, 0, m.nodes, lin), 2.0, 1e-15);
  EXPECT_NEAR(gcl_divergence(m, 0, m.nodes, lin), 2.0, 1e-15);

  Mesh axi = make_cartesian_mesh(1, 1, {0, 1}, {1, 2}, Geometry::axisymmetric);
  std::vector<Vec2> tr(axi.num_nodes(), Vec2{1.0, 0.0});
  EXPECT_NEAR(gcl_divergence(axi, 0, axi.nodes, tr), 0.0, 1e-15);
}

TEST(Divergence, GclMatchesVolumeRate) {
  std::mt19937 rng(71);
  const Mesh m = perturbed_box(rng, 4, Geometry::axisymmetric);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec2> vel(m.num_nodes());
  for (auto& v : vel) v = {u(rng), u(rng)};
  const double h = 1e-6;
  std::vector<Vec2> plus(m.nodes), minus(m.nodes);
  for (std::size_t p = 0; p < m.num_nodes(); ++p) {
    plus[p] += vel[p] * h;
    minus[p] -= vel[p] * h;
  }
  for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) {
    const double v = cell_measures(m, c).volume;
    const double rate = (cell_measures(m, c, plus).volume - cell_measures(m, c, minus).volume) / (2 * h);
    EXPECT_NEAR(gcl_divergence(m, c, m.nodes, vel), rate / v, 1e-7);
  }
}

TEST(ComputeDt, Examples) {
  const Mesh m = make_cartesian_mesh(10, 10, {0, 0}, {1, 1}, Geometry::planar);
  HydroState st = uniform_state(m, 1.4, 1.0, {});
  for (auto& c : st.cells) c.sound = 1.0;
  Options opt;
  EXPECT_NEAR(compute_dt(m, st, {}, opt, 0.0, 1.0), 0.025, 1e-15);
  for (auto& c : st.cells) c.sound = 2.0;
  EXPECT_NEAR(compute_dt(m, st, {}, opt, 0.0, 1.0), 0.0125, 1e-15);
  EXPECT_NEAR(compute_dt(m, st, {}, opt, 0.001, 1.0), 0.00105, 1e-15);
  EXPECT_THROW(compute_dt(m, st, {}, opt, 1e-20, 1.0), Error);
}

TEST(Step, UniformRestIsStationary) {
  std::mt19937 rng(73);
  Mesh m = perturbed_box(rng, 5, Geometry::axisymmetric);
  HydroState st = uniform_state(m, 1.0, 1.0, {});
  const auto nodes = m.nodes;
  const auto cells = st.cells;
  for (int i = 0; i < 5; ++i) step(m, st, {}, 0.0, 0.01);
  for (std::size_t p = 0; p < nodes.size(); ++p) EXPECT_LT(norm(m.nodes[p] - nodes[p]), 1e-15);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    EXPECT_NEAR(st.cells[c].rho, cells[c].rho, 1e-14);
    EXPECT_NEAR(st.cells[c].energy, cells[c].energy, 1e-14);
    EXPECT_EQ(st.cells[c].mass, cells[c].mass);
  }
}

TEST(Step, EnergyBalanceWithDrivenBoundaries) {
  std::mt19937 rng(79);
  for (int trial = 0; trial < 10; ++trial) {
    Mesh m = perturbed_box(rng, 6, Geometry::axisymmetric,
                           {BoundaryTag::piston, BoundaryTag::pressure, BoundaryTag::symmetry, BoundaryTag::wall});
    HydroState st = random_state(rng, m);
    BoundaryDrive drive;
    drive.piston_velocity = {0.3, 0.0};
    drive.pressure = [](double t) { return 0.7 + t; };
    const double e0 = st.total_energy();
    std::vector<double> masses;
    for (const auto& c : st.cells) masses.push_back(c.mass);
    double work = 0.0, t = 0.0;
    for (int i = 0; i < 10; ++i) {
      const NodalSolution ns = solve_nodes(m, st, drive, t);
      const double dt = compute_dt(m, st, ns.velocity, {}, 0.0, 1.0);
      work += apply_step(m, st, ns, dt).boundary_work;
      t += dt;
    }
    EXPECT_NEAR(st.total_energy() - e0, work, 1e-11 * e0);
    EXPECT_GT(std::abs(work), 1e-6);
    for (std::size_t c = 0; c < masses.size(); ++c) EXPECT_EQ(st.cells[c].mass, masses[c]);
  }
}

TEST(Step, WallsConserveEnergy) {
  std::mt19937 rng(83);
  Mesh m = perturbed_box(rng, 6, Geometry::planar);
  HydroState st = random_state(rng, m);
  const double e0 = st.total_energy();
  for (int i = 0; i < 20; ++i) {
    const NodalSolution ns = solve_nodes(m, st, {}, 0.0);
    const double dt = compute_dt(m, st, ns.velocity, {}, 0.0, 1.0);
    const StepDiagnostics d = apply_step(m, st, ns, dt);
    EXPECT_LT(std::abs(d.boundary_work), 1e-14 * e0);
  }
  EXPECT_NEAR(st.total_energy(), e0, 1e-12 * e0);
}

// Independent one-dimensional Lagrangian Godunov-acoustic scheme on a wall-bounded tube.
TEST(Step, PlanarShockTubeMatchesOneDimensionalScheme) {
  const int nx = 50;
  const double dy = 0.05, gamma = 1.4;
  Mesh m = make_cartesian_mesh(nx, 1, {0, 0}, {1, dy}, Geometry::planar);
  HydroState st = make_state(m, {{gamma}});
  std::vector<double> x(nx + 1), rho(nx), u(nx, 0.0), e(nx), p(nx), mass(nx);
  for (int i = 0; i <= nx; ++i) x[i] = static_cast<double>(i) / nx;
  for (int i = 0; i < nx; ++i) {
    const bool left = i < nx / 2;
    rho[i] = left ? 1.0 : 0.125;
    p[i] = left ? 1.0 : 0.1;
    e[i] = p[i] / ((gamma - 1) * rho[i]);
    mass[i] = rho[i] * (x[i + 1] - x[i]);
    set_pure_cell(st, m, i, 0, rho[i], p[i], {});
  }
  const double dt = 0.1 / nx / std::sqrt(gamma);
  for (int n = 0; n < 100; ++n) {
    step(m, st, {}, 0.0, dt);
    std::vector<double> z(nx), us(nx + 1, 0.0);
    for (int i = 0; i < nx; ++i) z[i] = rho[i] * std::sqrt(gamma * p[i] / rho[i]);
    for (int i = 1; i < nx; ++i)
      us[i] = (z[i - 1] * u[i - 1] + z[i] * u[i] + p[i - 1] - p[i]) / (z[i - 1] + z[i]);
    for (int i = 0; i < nx; ++i) {
      const double pl = p[i] + z[i] * (us[i] - u[i]);
      const double pr = p[i] - z[i] * (us[i + 1] - u[i]);
      u[i] -= dt * (pr - pl) / mass[i];
      e[i] -= dt * (pr * us[i + 1] - pl * us[i]) / mass[i];
    }
    for (int i = 0; i <= nx; ++i) x[i] += dt * us[i];
    for (int i = 0; i < nx; ++i) {
      rho[i] = mass[i] / (x[i + 1] - x[i]);
      p[i] = (gamma - 1) * rho[i] * (e[i] - 0.5 * u[i] * u[i]);
    }
  }
  for (int i = 0; i < nx; ++i) {
    EXPECT_NEAR(st.cells[i].rho, rho[i], 1e-12 * rho[i]);
    EXPECT_NEAR(st.cells[i].velocity.x, u[i], 1e-12);
    EXPECT_NEAR(st.cells[i].pressure, p[i], 1e-12 * p[i]);
    EXPECT_NEAR(st.cells[i].velocity.y, 0.0, 1e-14);
  }
}

TEST(Step, PolarSymmetryPreserved) {
  const int nt = 12, nr = 15;
  const auto radii = uniform_radii(nr, 1.0);
  Mesh m = make_polar_mesh(nt, radii, 0.0, std::numbers::pi / 2, Geometry::axisymmetric);
  HydroState st = make_state(m, {{1.4}});
  for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) {
    const int ring = c / nt;
    const double r = (ring + 0.5) / nr;
    set_pure_cell(st, m, c, 0, 1.0 + r, 1.0 + 10.0 * std::exp(-r * r / 0.05), {});
  }
  double dt_prev = 0.0;
  for (int n = 0; n < 60; ++n) {
    const NodalSolution ns = solve_nodes(m, st, {}, 0.0);
    const double dt = compute_dt(m, st, ns.velocity, {}, dt_prev, 1.0);
    const StepDiagnostics d = apply_step(m, st, ns, dt);
    EXPECT_LT(d.max_gcl_discrepancy, 1e-11 * std::max(d.max_divergence, 1e-300));
    dt_prev = dt;
    double umax = 0.0;
    for (const auto& u : ns.velocity) umax = std::max(umax, norm(u));
    for (std::size_t p = 1; p < m.num_nodes(); ++p) {
      const Vec2 u = ns.velocity[p];
      EXPECT_LE(std::abs(cross(u, m.nodes[p])), 1e-10 * umax * norm(m.nodes[p]));
    }
  }
  for (int j = 0; j < nr; ++j) {
    double mean = 0.0;
    for (int i = 0; i < nt; ++i) mean += st.cells[j * nt + i].rho / nt;
    for (int i = 0; i < nt; ++i) EXPECT_NEAR(st.cells[j * nt + i].rho, mean, 1e-10 * mean);
  }
}
