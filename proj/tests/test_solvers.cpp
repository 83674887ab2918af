#include <gtest/gtest.h>

#include "pff/oracle.hpp"
#include "pff/solvers.hpp"
#include "support.hpp"

using namespace pff;
using pff::testing::random_vector;

namespace {

VectorField with_dirichlet(VectorField u, const VectorField& g, const TriMesh& mesh) {
  for (Index i : mesh.dirichlet_nodes()) u.segment(static_cast<Eigen::Index>(2 * i), 2) = g.segment(2 * i, 2);
  return u;
}

}  // namespace

TEST(SolveU, AffineDatumOnWholeBoundaryIsReproduced) {
  const Discretization disc = pff::testing::square(4, {Side::bottom, Side::right, Side::top, Side::left});
  const auto n = static_cast<Eigen::Index>(disc.node_count());
  const auto m = MaterialModel::standard(1.0, 1.0);
  Eigen::Matrix2d A;
  A << 0.3, -0.2, 0.5, -0.4;
  const VectorField g = affine_load(A, 1.0).at(disc.mesh, 1.0);
  const auto res = solve_u(ScalarField::Ones(n), g, VectorField::Zero(2 * n), disc, m);
  EXPECT_LE((res.u - g).lpNorm<Eigen::Infinity>(), 1e-12);
  EXPECT_TRUE(res.stats.converged);
}

TEST(SolveU, ZeroDatumGivesZero) {
  const Discretization disc = pff::testing::square(3);
  const auto n = static_cast<Eigen::Index>(disc.node_count());
  const auto m = MaterialModel::standard(1.0, 1.0);
  const auto res = solve_u(ScalarField::Ones(n), VectorField::Zero(2 * n), VectorField::Zero(2 * n), disc, m);
  EXPECT_EQ(res.u.lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_EQ(res.stats.iterations, 0);
}

TEST(SolveU, ShearPresetResidualDescentAndUniqueness) {
  const auto c = pff::testing::load_case("shear.ini");
  const auto& disc = c.disc;
  const auto n = static_cast<Eigen::Index>(disc.node_count());
  const auto& m = c.config.material;
  const VectorField g = c.config.load.at(disc.mesh, 0.7);
  std::mt19937_64 rng(21);
  VectorField first;
  for (int k = 0; k < 3; ++k) {
    const VectorField init = with_dirichlet(random_vector(rng, 2 * n, -1.0, 1.0), g, disc.mesh);
    const auto res = solve_u(c.seed, g, init, disc, m);
    EXPECT_LE(free_dof_residual(res.u, c.seed, disc, m), kDefaultTol);
    EXPECT_LE(elastic_energy(res.u, c.seed, disc, m), elastic_energy(init, c.seed, disc, m));
    for (Index i : disc.mesh.dirichlet_nodes()) {
      EXPECT_EQ(res.u[2 * i], g[2 * i]);
      EXPECT_EQ(res.u[2 * i + 1], g[2 * i + 1]);
    }
    if (k == 0) {
      first = res.u;
    } else {
      EXPECT_LE((res.u - first).lpNorm<Eigen::Infinity>(), 1e-8);
    }
  }
}

TEST(SolveU, Errors) {
  const Discretization free_disc = pff::testing::square(2, {});
  const auto n = static_cast<Eigen::Index>(free_disc.node_count());
  const auto m = MaterialModel::standard(1.0, 1.0);
  EXPECT_THROW(solve_u(ScalarField::Ones(n), VectorField::Zero(2 * n), VectorField::Zero(2 * n), free_disc, m),
               CoercivityError);

  const Discretization disc = pff::testing::square(2);
  const VectorField g = preset_load(LoadPreset::tension, 1.0, 1.0).at(disc.mesh, 1.0);
  try {
    solve_u(ScalarField::Ones(n), g, VectorField::Zero(2 * n), disc, m, kDefaultTol, 0);
    FAIL() << "expected non-convergence";
  } catch (const NonConvergenceError& e) {
    EXPECT_EQ(e.best_iterate.size(), 2 * n);
    EXPECT_GT(e.best_residual, kDefaultTol);
  }
}

TEST(SolveZ, TrivialCases) {
  const Discretization disc = pff::testing::square(3);
  const auto n = static_cast<Eigen::Index>(disc.node_count());
  const auto m = MaterialModel::standard(1.0, 1.0);
  const VectorField u0 = VectorField::Zero(2 * n);
  const auto a = solve_z(u0, ScalarField::Ones(n), 0.1, 0.05, ScalarField::Ones(n), disc, m);
  EXPECT_EQ(a.z, ScalarField::Ones(n));
  EXPECT_LE(a.multipliers.lpNorm<Eigen::Infinity>(), 1e-15);
  EXPECT_EQ(solve_z_unpenalized(u0, ScalarField::Ones(n), disc, m).z, ScalarField::Ones(n));

  std::mt19937_64 rng(4);
  const VectorField u = random_vector(rng, 2 * n, -1.0, 1.0);
  const ScalarField prev = random_vector(rng, n, 0.5, 1.0);
  const auto b = solve_z(u, prev, 1e12, 1.0, prev, disc, m);
  EXPECT_LE((b.z - prev).lpNorm<Eigen::Infinity>(), 1e-6);
}

TEST(SolveZ, ConcentratedLoadMatchesProjectedGradient) {
  const Discretization disc = pff::testing::square(3);
  const auto n = static_cast<Eigen::Index>(disc.node_count());
  const auto m = MaterialModel::standard(1.0, 1.0);
  VectorField u = VectorField::Zero(2 * n);
  const Index centre = 5;  // interior node (1, 1)
  u[2 * centre] = 1.5;
  u[2 * centre + 1] = -0.7;
  const ScalarField prev = ScalarField::Ones(n);
  const double delta = 0.05, tau = 0.05;
  const auto res = solve_z(u, prev, delta, tau, prev, disc, m);
  EXPECT_LE(z_step_kkt_residual(u, res.z, prev, delta / tau, disc, m), kDefaultTol);
  const auto drop = prev - res.z;
  EXPECT_GE(drop.minCoeff(), 0.0);
  Eigen::Index arg = 0;
  drop.maxCoeff(&arg);
  // The length scale is of the order of the domain, so damage spreads; the
  // largest drop still sits on a loaded node and remote nodes drop less.
  const auto near = [&](Eigen::Index i) {
    return (disc.mesh.node(static_cast<Index>(i)) - disc.mesh.node(centre)).lpNorm<Eigen::Infinity>() < 0.34;
  };
  EXPECT_TRUE(near(arg));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!near(i)) EXPECT_LT(drop[i], drop[arg]);
  }
  const auto ref = oracle::z_step_by_projected_gradient(u, prev, delta / tau, disc, m);
  EXPECT_LE((res.z - ref.x).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(SolveZ, CertificatesOnRandomStates) {
  const Discretization disc = pff::testing::square(4);
  const auto n = static_cast<Eigen::Index>(disc.node_count());
  const auto m = MaterialModel::standard(1.0, 1.0);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    const VectorField u = random_vector(rng, 2 * n, -1.0, 1.0);
    const ScalarField prev = random_vector(rng, n, 0.2, 1.0);
    const double rho = 2.0;
    // An infeasible start is projected.
    const ScalarField init = prev + ScalarField::Constant(n, 0.3);
    const auto res = solve_z(u, prev, rho, 1.0, init, disc, m);
    EXPECT_TRUE((res.z.array() <= prev.array()).all());
    EXPECT_LE(z_step_kkt_residual(u, res.z, prev, rho, disc, m), kDefaultTol);
    EXPECT_LE(res.multipliers.cwiseProduct(prev - res.z).lpNorm<Eigen::Infinity>(), kDefaultTol);
    EXPECT_TRUE((res.multipliers.array() >= 0.0).all());

    const ScalarField dz = res.z - prev;
    const double lhs = grad_z_F(u, res.z, disc, m).dot(dz);
    const double rhs = -rho * l2_norm_sq(dz, disc);
    EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::max(std::abs(rhs), 1e-12));

    const double obj = z_step_objective(u, res.z, prev, rho, disc, m);
    for (int t = 0; t < 5; ++t) {
      const ScalarField trial = (res.z + random_vector(rng, n, -0.05, 0.05)).cwiseMin(prev);
      EXPECT_LT(obj, z_step_objective(u, trial, prev, rho, disc, m));
    }
  }
}

TEST(SolveZ, UnpenalizedSolutionHasNoAscentSlope) {
  const Discretization disc = pff::testing::square(3);
  const auto n = static_cast<Eigen::Index>(disc.node_count());
  const auto m = MaterialModel::standard(1.0, 1.0);
  std::mt19937_64 rng(6);
  const VectorField u = random_vector(rng, 2 * n, -1.0, 1.0);
  const ScalarField prev = random_vector(rng, n, 0.3, 1.0);
  const auto res = solve_z_unpenalized(u, prev, disc, m);
  EXPECT_LE(unilateral_slope(u, res.z, disc, m).value, 1e-7);
  const auto ref = oracle::z_step_by_projected_gradient(u, prev, 0.0, disc, m);
  EXPECT_LE((res.z - ref.x).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(SolveZ, IterationCapRaises) {
  const Discretization disc = pff::testing::square(3);
  const auto n = static_cast<Eigen::Index>(disc.node_count());
  const auto m = MaterialModel::standard(1.0, 1.0);
  std::mt19937_64 rng(7);
  const VectorField u = random_vector(rng, 2 * n, -1.0, 1.0);
  EXPECT_THROW(solve_z(u, ScalarField::Ones(n), 0.1, 0.1, ScalarField::Ones(n), disc, m, kDefaultTol, 0),
               NonConvergenceError);
}
