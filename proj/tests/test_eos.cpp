#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ccale/eos.hpp"

using namespace ccale;

TEST(Eos, PressureExamples) {
  EXPECT_DOUBLE_EQ(pressure({1.4}, 1.0, 2.5), 1.0);
  EXPECT_DOUBLE_EQ(pressure({5.0 / 3.0}, 1.0, 0.0), 0.0);
  EXPECT_NEAR(pressure({1.5}, 0.1, 2.5), 0.125, 1e-15);
  EXPECT_THROW(pressure({1.4}, 0.0, 1.0), Error);
}

TEST(Eos, SoundSpeedExamples) {
  const Acoustics a = sound_speed({1.4}, 1.0, 1.0);
  EXPECT_NEAR(a.sound, 1.183216, 1e-6);
  EXPECT_NEAR(a.impedance, 1.183216, 1e-6);
  EXPECT_DOUBLE_EQ(sound_speed({1.4}, 2.0, 0.0).impedance, 0.0);
  const Acoustics b = sound_speed({1.4}, 4.0, 1.0);
  EXPECT_NEAR(b.sound, std::sqrt(0.35), 1e-15);
  EXPECT_NEAR(b.impedance, 4.0 * std::sqrt(0.35), 1e-15);
  EXPECT_THROW(sound_speed({1.4}, 1.0, -1.0), Error);
}

TEST(Eos, InternalEnergyInverse) {
  const GasEos e{1.648};
  EXPECT_NEAR(pressure(e, 0.7, internal_energy(e, 0.7, 3.3)), 3.3, 1e-14);
}

namespace {

std::vector<MaterialState> two_materials(double volume) {
  std::vector<MaterialState> m(2);
  m[0].alpha = 0.5; m[0].mass = 0.5 * volume * 1.0; m[0].eps = 2.5;
  m[1].alpha = 0.5; m[1].mass = 0.5 * volume * 2.0; m[1].eps = 1.25;
  return m;
}

}  // namespace

TEST(EqualStrain, SingleMaterialTakesFullIncrement) {
  std::vector<MaterialState> m(1);
  m[0].alpha = 1.0; m[0].mass = 2.0; m[0].eps = 1.0;
  const std::vector<GasEos> eos{{1.4}};
  close_materials(m, eos, 1.0);
  const MixtureClosure mix = equal_strain_update(m, eos, 0.8, 0.6);
  EXPECT_NEAR(m[0].eps, 1.3, 1e-15);
  EXPECT_NEAR(mix.rho, 2.5, 1e-15);
  EXPECT_NEAR(mix.pressure, m[0].pressure, 0.0);
}

TEST(EqualStrain, UniformCompressionDoublesDensities) {
  auto m = two_materials(1.0);
  const std::vector<GasEos> eos{{1.4}, {1.4}};
  close_materials(m, eos, 1.0);
  EXPECT_NEAR(m[0].pressure, m[1].pressure, 1e-15);
  const double r0 = m[0].rho, r1 = m[1].rho;
  equal_strain_update(m, eos, 0.5, 0.0);
  EXPECT_DOUBLE_EQ(m[0].rho, 2.0 * r0);
  EXPECT_DOUBLE_EQ(m[1].rho, 2.0 * r1);
  EXPECT_EQ(m[0].alpha, 0.5);
}

TEST(EqualStrain, NoChangeIsIdentity) {
  auto m = two_materials(1.0);
  const std::vector<GasEos> eos{{1.4}, {1.6}};
  close_materials(m, eos, 1.0);
  const auto before = m;
  equal_strain_update(m, eos, 1.0, 0.0);
  for (int k = 0; k < 2; ++k) {
    EXPECT_EQ(m[k].eps, before[k].eps);
    EXPECT_EQ(m[k].pressure, before[k].pressure);
  }
}

TEST(EqualStrain, InternalEnergyMatchesCellUpdate) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  const std::vector<GasEos> eos{{1.4}, {5.0 / 3.0}, {1.2}};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<MaterialState> m(3);
    double s = 0.0;
    for (auto& mk : m) { mk.alpha = u(rng); s += mk.alpha; }
    for (auto& mk : m) { mk.alpha /= s; mk.mass = u(rng); mk.eps = u(rng); }
    close_materials(m, eos, 1.0);
    double ie0 = 0.0;
    for (auto& mk : m) ie0 += mk.mass * mk.eps;
    const double de = (u(rng) - 1.0) * 0.05 * ie0;
    const auto alphas = std::vector<double>{m[0].alpha, m[1].alpha, m[2].alpha};
    const MixtureClosure mix = equal_strain_update(m, eos, u(rng), de);
    double ie1 = 0.0;
    for (auto& mk : m) ie1 += mk.mass * mk.eps;
    EXPECT_NEAR(ie1, ie0 + de, 1e-12 * ie0);
    for (int k = 0; k < 3; ++k) EXPECT_EQ(m[k].alpha, alphas[k]);
    double p = 0.0;
    for (auto& mk : m) p += mk.alpha * mk.pressure;
    EXPECT_NEAR(mix.pressure, p, 1e-14 * p);
  }
}

TEST(EqualStrain, RejectsNonPositiveDensity) {
  std::vector<MaterialState> m(1);
  m[0].alpha = 1.0; m[0].mass = 1.0; m[0].eps = 1.0;
  const std::vector<GasEos> eos{{1.4}};
  EXPECT_THROW(close_materials(m, eos, -1.0), Error);
}
