#include <gtest/gtest.h>

#include <sstream>

#include "pff/oracle.hpp"
#include "support.hpp"

using namespace pff;
using namespace pff::oracle;

TEST(Oracle, CompareAndFiniteDifferences) {
  const auto v = compare("x", 1.0 + 1e-9, 1.0, 1e-8);
  EXPECT_TRUE(v.pass);
  EXPECT_NEAR(v.rel_err, 1e-9, 1e-15);
  EXPECT_FALSE(compare("y", 1.1, 1.0, 1e-8).pass);

  const Eigen::Vector3d x(0.3, -1.0, 2.0);
  const auto g = fd_gradient([](const Eigen::VectorXd& w) { return w.squaredNorm() + w[0] * w[1]; }, x, 1e-5);
  EXPECT_NEAR(g[0], 2 * 0.3 - 1.0, 1e-9);
  EXPECT_NEAR(g[1], -2.0 + 0.3, 1e-9);
  EXPECT_NEAR(g[2], 4.0, 1e-9);
  EXPECT_THROW(fd_gradient([](const Eigen::VectorXd&) { return 0.0; }, x, 0.0), std::invalid_argument);
}

TEST(Oracle, LipschitzEstimateOfQuadratic) {
  const Eigen::Vector3d d(1.0, 4.0, 9.0);
  const GradientFn grad = [&](const Eigen::VectorXd& w) -> Eigen::VectorXd { return d.cwiseProduct(w); };
  EXPECT_NEAR(estimate_lipschitz(grad, Eigen::VectorXd::Zero(3)), 9.0, 1e-4);
}

TEST(Oracle, ProjectedGradientOnBoxQp) {
  Eigen::MatrixXd A(3, 3);
  A << 4, 1, 0, 1, 3, 1, 0, 1, 2;
  const Eigen::Vector3d b(1.0, -2.0, 5.0);
  const ScalarFn fn = [&](const Eigen::VectorXd& x) { return 0.5 * x.dot(A * x) - b.dot(x); };
  const GradientFn gr = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x - b; };
  const auto res = projected_gradient(fn, gr, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3),
                                      Eigen::VectorXd::Constant(3, 2.0));
  EXPECT_TRUE(res.converged);
  // Bound at x1 = 0 and x3 = 2; x0 solves 4 x0 = 1.
  EXPECT_NEAR(res.x[0], 0.25, 1e-9);
  EXPECT_NEAR(res.x[1], 0.0, 1e-12);
  EXPECT_NEAR(res.x[2], 2.0, 1e-12);
}

TEST(Oracle, SlopeQpRejectsBadMatrices) {
  const Eigen::Vector2d g(1.0, 1.0);
  Eigen::Matrix2d asym;
  asym << 1, 2, 0, 1;
  EXPECT_THROW(slope_qp(g, asym), std::invalid_argument);
  EXPECT_THROW(slope_qp(g, -Eigen::Matrix2d::Identity()), std::invalid_argument);
  EXPECT_NEAR(slope_qp(Eigen::Vector2d(2.0, -1.0), 4.0 * Eigen::Matrix2d::Identity()), 1.0, 1e-12);
}

TEST(Oracle, DeskScaleLimits) {
  const Discretization disc = pff::testing::square(2);
  EvolutionConfig c;
  c.material = MaterialModel::standard(1.0, 1.0);
  c.load = preset_load(LoadPreset::tension, 1.0, 1.0);
  const auto n = static_cast<Eigen::Index>(disc.node_count());
  const State s{VectorField::Zero(2 * n), ScalarField::Ones(n)};
  EXPECT_THROW(joint_descent_probe(s, s.z, 0.1, 0.1, c, disc, 1, 0), std::invalid_argument);
  EXPECT_THROW(decoupled_exact_pair(s.z, 0.1, 0.1, c, disc), std::invalid_argument);  // h not constant
}

TEST(Oracle, SuitePassesAndIsDeterministic) {
  const auto a = run_oracle_suite(17);
  const auto b = run_oracle_suite(17);
  ASSERT_EQ(a.size(), b.size());
  ASSERT_GE(a.size(), 9u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(a[i].pass) << a[i].name << " err " << a[i].rel_err;
    EXPECT_EQ(a[i].value, b[i].value);
    EXPECT_EQ(a[i].oracle, b[i].oracle);
  }
  std::ostringstream out;
  write_verdicts(out, a);
  EXPECT_EQ(out.str().rfind("name,value,oracle,err,pass\n", 0), 0u);
}
