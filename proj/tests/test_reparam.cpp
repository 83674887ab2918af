#include <gtest/gtest.h>

#include "pff/reparam.hpp"
#include "support.hpp"

using namespace pff;

namespace {

struct Fixture {
  pff::testing::Case c = pff::testing::load_case("shear.ini");
  State s0 = prepare_initial_state(c.config, c.disc, c.seed);
};

Fixture& shared() {
  static Fixture f;
  return f;
}

const Trajectory& shear_run() {
  static const Trajectory traj = run_evolution(shared().c.config, shared().c.disc, shared().s0);
  return traj;
}

}  // namespace

TEST(Reparametrize, ZeroLoadIsIdentity) {
  auto cfg = shared().c.config;
  cfg.load.rate = 0.0;
  const auto traj = run_evolution(cfg, shared().c.disc, shared().s0);
  const auto rt = reparametrize(traj, shared().c.disc, 0.0, 100);
  EXPECT_DOUBLE_EQ(rt.sigma_end, cfg.T);
  for (std::size_t j = 0; j < rt.s.size(); ++j) {
    EXPECT_NEAR(rt.t[j], rt.s[j], 1e-14);
    EXPECT_EQ(rt.dz_H1[j], 0.0);
  }
  for (double d : rt.interval_dt_ds) EXPECT_DOUBLE_EQ(d, 1.0);
  const auto st = stationarity_check(rt);
  EXPECT_EQ(st.max_advancing_slope, 0.0);
}

TEST(Reparametrize, KnotNormalizationAndMonotoneSigma) {
  const auto& disc = shared().c.disc;
  const auto rt = reparametrize(shear_run(), disc);
  EXPECT_LE(rt.knot_normalization_error(), 1e-10);
  for (std::size_t i = 1; i < rt.knot_sigma.size(); ++i) EXPECT_GT(rt.knot_sigma[i], rt.knot_sigma[i - 1]);
  EXPECT_LE(rt.grid_normalization_max(disc), 1.0 + 1e-8);
  EXPECT_EQ(rt.t.front(), 0.0);
  EXPECT_EQ(rt.t.back(), shear_run().config.T);
  for (std::size_t j = 1; j < rt.t.size(); ++j) EXPECT_GE(rt.t[j], rt.t[j - 1]);
  // Total length is T plus the summed H1 increments.
  EXPECT_NEAR(rt.sigma_end, shear_run().config.T + shear_run().records.back().cum_arc_len, 1e-12);
}

TEST(Reparametrize, ConstantExtensionIsExact) {
  const auto& traj = shear_run();
  const auto base = reparametrize(traj, shared().c.disc);
  const auto rt = reparametrize(traj, shared().c.disc, 1.5 * base.sigma_end, 300);
  int extended = 0;
  for (std::size_t j = 0; j < rt.s.size(); ++j) {
    if (rt.s[j] < rt.sigma_end) continue;
    ++extended;
    EXPECT_EQ(rt.z[j], traj.states.back().z);
    EXPECT_EQ(rt.u[j], traj.states.back().u);
    EXPECT_EQ(rt.t[j], traj.times.back());
    EXPECT_EQ(rt.dt_ds[j], 0.0);
  }
  EXPECT_GT(extended, 90);
  EXPECT_THROW(reparametrize(traj, shared().c.disc, 0.5 * base.sigma_end), std::invalid_argument);
}

TEST(Reparametrize, SingleJumpAddsItsLength) {
  const auto& disc = shared().c.disc;
  Trajectory traj;
  traj.config = shared().c.config;
  traj.config.steps = 1;
  ScalarField z1 = shared().s0.z;
  z1 *= 0.9;
  traj.times = {0.0, traj.config.T};
  traj.states = {shared().s0, State{shared().s0.u, z1}};
  traj.records.resize(2);
  const auto rt = reparametrize(traj, disc, 0.0, 10);
  EXPECT_NEAR(rt.sigma_end, traj.config.T + h1_norm(z1 - shared().s0.z, disc), 1e-14);
  EXPECT_THROW(reparametrize(Trajectory{}, disc), std::invalid_argument);
}

TEST(Stationarity, DirectionAndAlignmentAtKnots) {
  const auto rt = reparametrize(shear_run(), shared().c.disc);
  const auto st = stationarity_check(rt);
  EXPECT_LE(st.max_alignment_err, 1e-6);
  EXPECT_LE(st.max_direction_err, 1e-6);
  EXPECT_GT(st.advancing_points, 0);
  EXPECT_GT(st.max_advancing_slope, 0.0);
}

TEST(DeltaSweep, RejectsBadInput) {
  const auto& c = shared().c;
  EXPECT_THROW(delta_sweep(c.config, c.disc, shared().s0, {}), std::invalid_argument);
  EXPECT_THROW(delta_sweep(c.config, c.disc, shared().s0, {0.05, 0.1}), std::invalid_argument);
  EXPECT_THROW(delta_sweep(c.config, c.disc, shared().s0, {0.1, -0.1}), std::invalid_argument);
  auto coarse = c.config;
  coarse.steps = 5;  // tau = 0.2 > delta
  EXPECT_THROW(delta_sweep(coarse, c.disc, shared().s0, {0.1}), std::invalid_argument);
}

TEST(DeltaSweep, ZeroLoadTrajectoriesCoincide) {
  auto cfg = shared().c.config;
  cfg.load.rate = 0.0;
  SweepOptions opt;
  opt.tau_ratio = 0.5;
  opt.grid_intervals = 200;
  const auto rep = delta_sweep(cfg, shared().c.disc, shared().s0, {0.1, 0.05}, opt);
  ASSERT_EQ(rep.rows.size(), 2u);
  EXPECT_EQ(rep.rows[0].pairwise_distance_to_next, 0.0);
  EXPECT_DOUBLE_EQ(rep.rows[0].arc_length, cfg.T);
  EXPECT_DOUBLE_EQ(rep.rows[1].arc_length, cfg.T);
  EXPECT_EQ(rep.rows[0].steps, 20);
  EXPECT_EQ(rep.rows[1].steps, 40);
}

TEST(DeltaSweep, ParallelMatchesSerial) {
  const auto& c = shared().c;
  SweepOptions opt;
  opt.tau_ratio = 0.5;
  opt.grid_intervals = 200;
  auto cfg = c.config;
  cfg.T = 0.4;
  const auto par = delta_sweep(cfg, c.disc, shared().s0, {0.1, 0.05}, opt);
  opt.parallel = false;
  const auto ser = delta_sweep(cfg, c.disc, shared().s0, {0.1, 0.05}, opt);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(par.rows[i].arc_length, ser.rows[i].arc_length);
    EXPECT_EQ(par.trajectories[i].states.back().z, ser.trajectories[i].states.back().z);
  }
}
