#include <gtest/gtest.h>

#include <cmath>

#include "pff/tensor.hpp"
#include "support.hpp"

using namespace pff;
using pff::testing::random_tensor;

namespace {

MaterialModel unit_material() { return MaterialModel::standard(1.0, 1.0, 0.1); }

void expect_tensor(const SymTensor2& a, const SymTensor2& b, double tol = 1e-14) {
  EXPECT_NEAR(a.xx, b.xx, tol);
  EXPECT_NEAR(a.yy, b.yy, tol);
  EXPECT_NEAR(a.xy, b.xy, tol);
}

double fd_dW_dE(double z, const SymTensor2& e, const MaterialModel& m, int comp) {
  const double h = 1e-6;
  SymTensor2 p = e, q = e;
  double* pp = comp == 0 ? &p.xx : comp == 1 ? &p.yy : &p.xy;
  double* qq = comp == 0 ? &q.xx : comp == 1 ? &q.yy : &q.xy;
  *pp += h;
  *qq -= h;
  return (energy_density(z, p, m) - energy_density(z, q, m)) / (2.0 * h);
}

}  // namespace

TEST(VolDevSplit, Examples) {
  auto [v1, d1] = vol_dev_split(SymTensor2::identity());
  expect_tensor(v1, SymTensor2::identity());
  expect_tensor(d1, SymTensor2::zero());

  auto [v2, d2] = vol_dev_split({1.0, -1.0, 0.0});
  expect_tensor(v2, SymTensor2::zero());
  expect_tensor(d2, {1.0, -1.0, 0.0});

  auto [v3, d3] = vol_dev_split({2.0, 0.0, 1.0});
  expect_tensor(v3, SymTensor2::identity());
  expect_tensor(d3, {1.0, -1.0, 1.0});
}

TEST(TensileCompressive, Examples) {
  auto a = tensile_compressive(SymTensor2::identity());
  expect_tensor(a.plus, SymTensor2::identity());
  expect_tensor(a.minus, SymTensor2::zero());

  auto b = tensile_compressive(-SymTensor2::identity());
  expect_tensor(b.plus, SymTensor2::zero());
  expect_tensor(b.minus, SymTensor2::identity());

  auto c = tensile_compressive({1.0, -1.0, 0.0});
  expect_tensor(c.plus, SymTensor2::zero());
  expect_tensor(c.minus, SymTensor2::zero());
}

TEST(SplitIdentities, RandomTensors) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 10000; ++k) {
    const SymTensor2 e = random_tensor(rng, 3.0);
    const auto [vol, dev] = vol_dev_split(e);
    const auto pm = tensile_compressive(e);
    EXPECT_LE(std::abs(contract(vol, dev)), 1e-12);
    EXPECT_LE(std::abs(e.norm_sq() - vol.norm_sq() - dev.norm_sq()), 1e-12);
    EXPECT_LE(std::abs(vol.norm_sq() - pm.plus.norm_sq() - pm.minus.norm_sq()), 1e-12);
    EXPECT_TRUE(pm.plus.norm_sq() == 0.0 || pm.minus.norm_sq() == 0.0);
    EXPECT_NEAR(dev.trace(), 0.0, 1e-14);
  }
}

TEST(EnergyDensity, Examples) {
  const auto m = unit_material();
  EXPECT_NEAR(energy_density(1.0, SymTensor2::identity(), m), 2.2, 1e-14);
  EXPECT_NEAR(energy_density(0.0, -SymTensor2::identity(), m), 2.0, 1e-14);
  EXPECT_NEAR(energy_density(0.0, {1.0, -1.0, 0.0}, m), 0.2, 1e-14);
}

TEST(EnergyDensity, NonnegativeAndPhaseIndependentUnderCompression) {
  const auto m = unit_material();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> zdist(-0.5, 1.5);
  for (int k = 0; k < 1000; ++k) {
    const SymTensor2 e = random_tensor(rng);
    EXPECT_GE(energy_density(zdist(rng), e, m), 0.0);
    const double c = -std::abs(e.xx);
    const SymTensor2 pressure = c * SymTensor2::identity();
    EXPECT_EQ(energy_density(0.0, pressure, m), energy_density(zdist(rng), pressure, m));
  }
}

TEST(Stress, Examples) {
  const auto m = unit_material();
  for (double z : {0.0, 0.4, 1.0}) expect_tensor(stress(z, -SymTensor2::identity(), m), -2.0 * SymTensor2::identity());
  expect_tensor(stress(1.0, SymTensor2::identity(), m), 2.2 * SymTensor2::identity(), 1e-14);
}

TEST(Stress, MatchesFiniteDifferences) {
  const auto m = MaterialModel::standard(1.3, 0.7);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> zdist(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double z = zdist(rng);
    const SymTensor2 e = random_tensor(rng);
    if (std::abs(e.trace()) < 1e-3) continue;
    const SymTensor2 s = stress(z, e, m);
    // The xy entry appears twice in the full tensor, so dW/dxy = 2 s.xy.
    EXPECT_NEAR(fd_dW_dE(z, e, m, 0), s.xx, 1e-6 * (1.0 + std::abs(s.xx)));
    EXPECT_NEAR(fd_dW_dE(z, e, m, 1), s.yy, 1e-6 * (1.0 + std::abs(s.yy)));
    EXPECT_NEAR(fd_dW_dE(z, e, m, 2), 2.0 * s.xy, 1e-6 * (1.0 + std::abs(s.xy)));
  }
}

TEST(Stress, ContinuousAcrossTraceZero) {
  const auto m = unit_material();
  const SymTensor2 e{1.0, -1.0, 0.3};
  const SymTensor2 up = stress(0.5, e + 1e-12 * SymTensor2::identity(), m);
  const SymTensor2 down = stress(0.5, e - 1e-12 * SymTensor2::identity(), m);
  expect_tensor(up, down, 1e-10);
}

TEST(DensityDz, ExamplesAndFiniteDifferences) {
  const auto m = unit_material();
  EXPECT_EQ(energy_density_dz(0.3, -SymTensor2::identity(), m), 0.0);
  EXPECT_NEAR(energy_density_dz(1.0, SymTensor2::identity(), m), 4.0, 1e-14);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> zdist(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double z = zdist(rng);
    const SymTensor2 e = random_tensor(rng);
    const double fd = (energy_density(z + 1e-6, e, m) - energy_density(z - 1e-6, e, m)) / 2e-6;
    const double an = energy_density_dz(z, e, m);
    EXPECT_LE(std::abs(fd - an), 1e-6 * std::max(std::abs(an), 1e-8));
    EXPECT_GE(an, 0.0);
  }
}

TEST(Tangent, MatchesStressDifferenceOnSameBranch) {
  const auto m = MaterialModel::standard(1.0, 2.0);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 200; ++k) {
    const SymTensor2 e = random_tensor(rng);
    const SymTensor2 de = random_tensor(rng, 1e-4);
    if ((e.trace() >= 0.0) != ((e + de).trace() >= 0.0)) continue;
    const SymTensor2 diff = stress_with_factor(0.3, e + de, m) - stress_with_factor(0.3, e, m);
    expect_tensor(tangent_apply(0.3, e, de, m), diff, 1e-12);
  }
}

// Constants: c = min(2 mu h(0), kappa min(h(0), 1)), C = 2 max(mu, kappa) max(h(1), 1).
TEST(StressBounds, MonotoneLipschitzLinearConvex) {
  const auto m = MaterialModel::standard(1.2, 0.8, 0.05);
  const double h0 = m.h(0.0);
  const double c = std::min(2.0 * m.mu * h0, m.kappa * std::min(h0, 1.0));
  const double C = 2.0 * std::max(m.mu, m.kappa) * std::max(m.h(1.0), 1.0);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> zdist(0.0, 1.0);
  int violations = 0;
  for (int k = 0; k < 10000; ++k) {
    const double z = zdist(rng);
    const SymTensor2 a = random_tensor(rng, 2.0), b = random_tensor(rng, 2.0);
    const SymTensor2 ds = stress(z, a, m) - stress(z, b, m);
    const SymTensor2 de = a - b;
    if (contract(ds, de) < c * de.norm_sq() - 1e-12) ++violations;
    if (std::sqrt(ds.norm_sq()) > C * std::sqrt(de.norm_sq()) + 1e-12) ++violations;
    if (std::sqrt(stress(z, a, m).norm_sq()) > C * std::sqrt(a.norm_sq()) + 1e-12) ++violations;
    const double mid = energy_density(z, 0.5 * (a + b), m);
    if (mid > 0.5 * (energy_density(z, a, m) + energy_density(z, b, m)) + 1e-12) ++violations;
  }
  EXPECT_EQ(violations, 0);
}
