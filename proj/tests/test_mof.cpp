#include <gtest/gtest.h>

#include <cmath>
#include <iostream>
#include <numbers>
#include <random>

#include "ccale/mof.hpp"
#include "ccale/mof_static.hpp"
#include "oracles.hpp"

using namespace ccale;
using namespace ccale::mof;

namespace {

const Polygon unit_square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
constexpr double half_pi = std::numbers::pi / 2;

double angle_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2.0 * std::numbers::pi);
  return std::min(d, 2.0 * std::numbers::pi - d);
}

}  // namespace

TEST(Clip, HalfSquareMoments) {
  const MomentSet pl = moments_of(cut_below(unit_square, half_pi, 0.5), Geometry::planar);
  EXPECT_NEAR(pl.m0, 0.5, 1e-15);
  const MomentSet ax = moments_of(cut_below(unit_square, half_pi, 0.5), Geometry::axisymmetric);
  EXPECT_NEAR(ax.m0, 0.125, 1e-15);
  EXPECT_NEAR(ax.m0_pl, 0.5, 1e-15);
  EXPECT_TRUE(cut_below(unit_square, half_pi, -0.5).empty());
  EXPECT_NEAR(moments_of(cut_below(unit_square, half_pi, 1.5), Geometry::planar).m0, 1.0, 1e-15);
}

TEST(FloodFill, Examples) {
  EXPECT_NEAR(flood_fill(unit_square, half_pi, 0.5, Geometry::planar), 0.5, 1e-14);
  EXPECT_NEAR(flood_fill(unit_square, half_pi, 0.25, Geometry::axisymmetric), std::sqrt(0.5), 1e-13);
  EXPECT_NEAR(flood_fill(unit_square, half_pi, 1.0, Geometry::planar), 1.0, 1e-14);
  EXPECT_THROW(flood_fill(unit_square, half_pi, 1.5, Geometry::planar), Error);
}

TEST(FloodFill, VolumeWithinTolerance) {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const auto poly = oracle::random_star(rng, 7, {0.2, 1.5}, 0.2, 1.0);
    const double v = polygon_moments(poly).volume(Geometry::axisymmetric);
    const double target = u(rng) * v;
    const double theta = 2.0 * std::numbers::pi * u(rng);
    const double d = flood_fill(poly, theta, target, Geometry::axisymmetric);
    const double got = polygon_moments(cut_below(poly, theta, d)).volume(Geometry::axisymmetric);
    EXPECT_LE(std::abs(got - target), volume_tolerance * v);
  }
}

TEST(ReconstructSingle, LowerHalfOfSquare) {
  const MomentSet t = moments_of(cut_below(unit_square, half_pi, 0.5), Geometry::axisymmetric);
  const SingleResult r = reconstruct_single(unit_square, {t.m0, t.centroid(CentroidMode::axisymmetric)},
                                            Geometry::axisymmetric);
  EXPECT_LT(angle_distance(r.theta, half_pi), 1e-9);
  EXPECT_NEAR(r.d, 0.5, 1e-9);
  EXPECT_LT(r.defect, 1e-20);
}

TEST(ReconstructSingle, RotatedLine) {
  const double theta = half_pi + 37.0 * std::numbers::pi / 180.0;
  const double d = dot(unit_from_angle(theta), Vec2{0.55, 0.4});
  for (Geometry g : {Geometry::planar, Geometry::axisymmetric}) {
    const MomentSet t = moments_of(cut_below(unit_square, theta, d), g);
    const SingleResult r = reconstruct_single(unit_square, {t.m0, t.centroid(CentroidMode::axisymmetric)}, g);
    EXPECT_LT(angle_distance(r.theta, theta), 1e-8);
    EXPECT_NEAR(r.d, d, 1e-8);
    EXPECT_LT(std::sqrt(r.defect), 1e-10);
  }
}

TEST(ReconstructSingle, LinearInterfaceExactness) {
  std::mt19937 rng(103);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int trials = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const bool convex = trial % 2 == 0;
    const Vec2 c{u(rng) * 2.0 - 1.0, 0.5 + 2.0 * u(rng)};
    auto poly = convex ? oracle::random_convex(rng, 3 + trial % 6, c, 0.3 + u(rng), 0.3 + u(rng))
                       : oracle::random_star(rng, 4 + trial % 5, c, 0.4, 0.8);
    // Keep every polygon off the axis so the R-weighted measure stays positive.
    double ymin = 1e300;
    for (const auto& p : poly) ymin = std::min(ymin, p.y);
    for (auto& p : poly) p.y += 0.05 - std::min(ymin, 0.0);
    const Geometry g = trial % 3 == 0 ? Geometry::planar : Geometry::axisymmetric;
    const CentroidMode mode = trial % 4 == 1 ? CentroidMode::planar : CentroidMode::axisymmetric;
    const double theta = 2.0 * std::numbers::pi * u(rng);
    double lo = 1e300, hi = -1e300;
    for (const auto& p : poly) {
      lo = std::min(lo, dot(unit_from_angle(theta), p));
      hi = std::max(hi, dot(unit_from_angle(theta), p));
    }
    const double d = lo + (0.1 + 0.8 * u(rng)) * (hi - lo);
    const MomentSet t = moments_of(cut_below(poly, theta, d), g);
    const MomentSet whole = moments_of(poly, g);
    if (t.m0 < 1e-3 * whole.m0 || t.m0 > (1 - 1e-3) * whole.m0) continue;
    const SingleResult r = reconstruct_single(poly, {t.m0, t.centroid(mode)}, g, mode);
    worst = std::max(worst, std::sqrt(r.defect) / std::sqrt(whole.m0_pl));
    ++trials;
  }
  std::cout << "linear exactness: " << trials << " cases, worst relative centroid defect " << worst << "\n";
  EXPECT_GT(trials, 900);
  EXPECT_LT(worst, 1e-9);
}

TEST(ReconstructSingle, AxisymmetricPathWithUnitRadiusMatchesPlanar) {
  std::mt19937 rng(107);
  for (int trial = 0; trial < 50; ++trial) {
    const auto poly = oracle::random_convex(rng, 6, {0.0, 0.0}, 1.0, 0.7);
    const MomentSet t = moments_of(cut_below(poly, 0.3 * trial, 0.1), Geometry::planar);
    const SingleResult a = reconstruct_single(poly, {t.m0, t.centroid(CentroidMode::axisymmetric)},
                                              Geometry::planar, CentroidMode::axisymmetric);
    const SingleResult b = reconstruct_single(poly, {t.m0, t.centroid(CentroidMode::planar)}, Geometry::planar,
                                              CentroidMode::planar);
    EXPECT_NEAR(a.theta, b.theta, 1e-14);
    EXPECT_NEAR(a.d, b.d, 1e-14);
  }
}

TEST(ReconstructMulti, TwoMaterialsExactVolumes) {
  const Polygon cell{{0, 0.5}, {1, 0.6}, {0.9, 1.5}, {0.1, 1.4}};
  const double theta = 1.1;
  const double d = dot(unit_from_angle(theta), Vec2{0.5, 1.0});
  const Polygon a = cut_below(cell, theta, d), b = cut_above(cell, theta, d);
  std::vector<Target> targets;
  for (const auto& p : {a, b}) {
    const MomentSet m = moments_of(p, Geometry::axisymmetric);
    targets.push_back({m.m0, m.centroid(CentroidMode::axisymmetric)});
  }
  const Partition part = reconstruct_multi(cell, targets, Geometry::axisymmetric);
  ASSERT_EQ(part.order.size(), 2u);
  for (int k = 0; k < 2; ++k)
    EXPECT_NEAR(moments_of(part.pieces[k], Geometry::axisymmetric).m0, targets[k].volume, 1e-12);
  EXPECT_LT(part.defect, 1e-18);
}

TEST(ReconstructMulti, AbsentMaterialIsSkipped) {
  std::vector<Target> targets{{0.0, {}}, {0.5, {0.5, 2.0 / 3.0}}};
  const Partition part = reconstruct_multi(unit_square, targets, Geometry::axisymmetric);
  EXPECT_TRUE(part.pieces[0].empty());
  EXPECT_EQ(part.pieces[1].size(), 4u);
}

TEST(StaticSuite, TruePartitionsTileTheCell) {
  for (Layout l : {Layout::filament, Layout::t_junction, Layout::y_junction})
    for (auto [chi, seg] : {std::pair{1.0, 200}, std::pair{64.0, 1}}) {
      const auto parts = true_partition(l, chi, seg);
      double a = 0.0;
      for (const auto& p : parts) {
        EXPECT_GT(signed_area(p), 0.0);
        EXPECT_FALSE(is_self_intersecting(p));
        a += signed_area(p);
      }
      EXPECT_NEAR(a, 1.0, 1e-12) << to_string(l) << " chi=" << chi;
    }
}

TEST(StaticSuite, PiecewiseLinearFilamentAndTJunctionAreExact) {
  for (Layout l : {Layout::filament, Layout::t_junction})
    for (CentroidMode mode : {CentroidMode::planar, CentroidMode::axisymmetric}) {
      const StaticResult r = run_static(l, 64.0, 1, Geometry::axisymmetric, mode);
      for (double s : r.symdiff) EXPECT_LT(s, 1e-6) << to_string(l);
      EXPECT_LT(r.partition.defect, 1e-8);
    }
}

TEST(StaticSuite, CurvedCasesReport) {
  for (Layout l : {Layout::filament, Layout::t_junction, Layout::y_junction}) {
    const StaticResult pl = run_static(l, 1.0, 200, Geometry::axisymmetric, CentroidMode::planar);
    const StaticResult ax = run_static(l, 1.0, 200, Geometry::axisymmetric, CentroidMode::axisymmetric);
    std::cout << to_string(l) << " chi=1 order planar:";
    for (int k : pl.partition.order) std::cout << ' ' << k;
    std::cout << " axisymmetric:";
    for (int k : ax.partition.order) std::cout << ' ' << k;
    std::cout << " symdiff planar " << pl.symdiff[0] + pl.symdiff[1] + pl.symdiff[2] << " axisymmetric "
              << ax.symdiff[0] + ax.symdiff[1] + ax.symdiff[2] << "\n";
    for (double s : ax.symdiff) EXPECT_LT(s, 0.1);
  }
}

TEST(CircleConvergence, SecondOrder) {
  std::vector<double> h, err;
  for (int n : {8, 16, 32, 64, 128}) {
    h.push_back(1.0 / n);
    err.push_back(circle_error(n, {0, 0}, 0.61, Geometry::axisymmetric, CentroidMode::axisymmetric));
  }
  const double order = oracle::fitted_order(h, err);
  std::cout << "circle symmetric-difference order " << order << "\n";
  EXPECT_GE(order, 1.8);
  for (std::size_t i = 1; i < err.size(); ++i) EXPECT_LT(err[i], err[i - 1]);
}

TEST(LagrangianCentroids, AffineMotions) {
  const Polygon cell{{0.1, 0.2}, {1.0, 0.1}, {1.2, 1.0}, {0.0, 0.9}};
  const std::vector<Vec2> xs{{0.5, 0.5}, {0.3, 0.7}};
  const auto same = update_centroids_lagrangian(cell, cell, xs, Geometry::axisymmetric);
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_LT(norm(same[i] - xs[i]), 1e-15);
  Polygon moved = cell, scaled = cell;
  for (auto& p : moved) p += Vec2{0.3, -0.05};
  for (auto& p : scaled) p *= 1.7;
  const auto tr = update_centroids_lagrangian(cell, moved, xs, Geometry::axisymmetric);
  const auto sc = update_centroids_lagrangian(cell, scaled, xs, Geometry::axisymmetric);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_LT(norm(tr[i] - (xs[i] + Vec2{0.3, -0.05})), 1e-14);
    EXPECT_LT(norm(sc[i] - xs[i] * 1.7), 1e-14);
  }
}
