#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pff/io.hpp"
#include "support.hpp"

using namespace pff;

namespace {

std::string error_of(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_config(in, "test.ini");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

const char* kMinimal = "[time]\nT = 1\nsteps = 4\n[viscosity]\ndelta = 0.5\n";

}  // namespace

TEST(ConfigParse, MinimalAndFull) {
  std::istringstream in(kMinimal);
  const auto cfg = parse_config(in);
  EXPECT_EQ(cfg.steps, 4);
  EXPECT_EQ(cfg.delta, 0.5);
  EXPECT_EQ(cfg.preset, LoadPreset::shear);

  const auto full = load_config(pff::testing::config_path("shear.ini"));
  EXPECT_EQ(full.nx, 16);
  EXPECT_EQ(full.width, 4.0);
  EXPECT_TRUE(full.has_notch);
  EXPECT_EQ(full.notch.value, 0.05);

  const auto sweep = load_config(pff::testing::config_path("sweep.ini"));
  EXPECT_EQ(sweep.delta_list, (std::vector<double>{0.1, 0.05, 0.025}));
  EXPECT_EQ(sweep.tau_ratio, 0.5);
}

TEST(ConfigParse, ErrorsCarryLocation) {
  EXPECT_NE(error_of("[viscosity]\ndelta = 1\n").find("[time]"), std::string::npos);
  EXPECT_NE(error_of("[time]\nT = 1\n[viscosity]\ndelta = 1\n").find("steps"), std::string::npos);
  EXPECT_NE(error_of(std::string(kMinimal) + "[material]\nnu = 0.3\n").find("test.ini:7"), std::string::npos);
  EXPECT_NE(error_of(std::string(kMinimal) + "[bogus]\n").find("unknown section"), std::string::npos);
  EXPECT_NE(error_of("[time]\nT = abc\nsteps = 1\n[viscosity]\ndelta=1\n").find("test.ini:2"), std::string::npos);
  EXPECT_NE(error_of(std::string(kMinimal) + "[bc]\npreset = twist\n").find("twist"), std::string::npos);
  EXPECT_NE(error_of(std::string(kMinimal) + "[material]\nmu = -1\n").find("mu"), std::string::npos);
  EXPECT_NE(error_of(std::string(kMinimal) + "[bc]\npreset = custom\n").find("dirichlet"), std::string::npos);
  EXPECT_NE(error_of("T = 1\n").find("outside"), std::string::npos);
  EXPECT_NE(error_of(std::string(kMinimal) + "[time]\nT = 2\n").find("duplicate"), std::string::npos);
}

TEST(ConfigBuild, CustomPreset) {
  std::istringstream in(std::string(kMinimal) +
                        "[mesh]\nnx = 2\nny = 2\n[bc]\npreset = custom\ndirichlet = left, bottom\nprofile = 1 0 0 2\n");
  const auto cfg = parse_config(in);
  const auto disc = make_discretization(cfg);
  EXPECT_EQ(disc.mesh.dirichlet_nodes().size(), 5u);
  const auto ec = make_evolution_config(cfg, disc);
  const VectorField g = ec.load.at(disc.mesh, 0.5);
  EXPECT_DOUBLE_EQ(g[2 * 8], 0.5);      // node (1, 1): x component rate t x
  EXPECT_DOUBLE_EQ(g[2 * 8 + 1], 1.0);  // y component rate t 2 y
}

TEST(TraceCsv, RoundTripIsBitExact) {
  std::vector<StepRecord> recs(3);
  for (int i = 0; i < 3; ++i) {
    recs[i].step = i;
    recs[i].t = 0.1 * i;
    recs[i].F = 1.0 / 3.0 + i;
    recs[i].slope = std::sqrt(2.0) * i;
    recs[i].power = -1e-300 * i;
    recs[i].inner_iters = 7 * i;
    recs[i].cum_arc_len = std::exp(1.0) * i;
  }
  std::stringstream buf;
  write_trace_csv(buf, recs);
  EXPECT_EQ(buf.str().substr(0, buf.str().find('\n')), kTraceHeader);
  const auto back = read_trace_csv(buf);
  ASSERT_EQ(back.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(back[i].t, recs[i].t);
    EXPECT_EQ(back[i].F, recs[i].F);
    EXPECT_EQ(back[i].slope, recs[i].slope);
    EXPECT_EQ(back[i].power, recs[i].power);
    EXPECT_EQ(back[i].inner_iters, recs[i].inner_iters);
    EXPECT_EQ(back[i].cum_arc_len, recs[i].cum_arc_len);
  }
}

TEST(TraceCsv, RejectsBadInput) {
  std::istringstream wrong_header("step,t,F\n");
  EXPECT_THROW(read_trace_csv(wrong_header), IoError);
  std::istringstream short_row(std::string(kTraceHeader) + "\n0,1,2\n");
  try {
    read_trace_csv(short_row, "x.csv");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("x.csv:2"), std::string::npos);
  }
}

TEST(StatesCsv, RoundTrip) {
  const Discretization disc = pff::testing::square(2);
  const auto n = static_cast<Eigen::Index>(disc.node_count());
  std::mt19937_64 rng(1);
  Trajectory traj;
  traj.times = {0.0, 0.5};
  for (int i = 0; i < 2; ++i) {
    traj.states.push_back({pff::testing::random_vector(rng, 2 * n, -1, 1), pff::testing::random_vector(rng, n, 0, 1)});
  }
  std::stringstream buf;
  write_states_csv(buf, traj);
  const auto dump = read_states_csv(buf, disc.node_count());
  ASSERT_EQ(dump.states.size(), 2u);
  EXPECT_EQ(dump.times, traj.times);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(dump.states[i].u, traj.states[i].u);
    EXPECT_EQ(dump.states[i].z, traj.states[i].z);
  }
  std::stringstream again;
  write_states_csv(again, traj);
  EXPECT_THROW(read_states_csv(again, 3), IoError);
}

TEST(Vtk, TwoTriangleMesh) {
  const auto mesh = build_structured_mesh(1, 1, 1.0, 1.0);
  const State s{VectorField::Constant(8, 0.25), ScalarField::Constant(4, 0.5)};
  std::stringstream buf;
  write_vtk(buf, s, mesh);
  const std::string text = buf.str();
  EXPECT_NE(text.find("POINTS 4 double"), std::string::npos);
  EXPECT_NE(text.find("CELLS 2 8"), std::string::npos);
  EXPECT_NE(text.find("VECTORS displacement double"), std::string::npos);
  EXPECT_NE(text.find("SCALARS phase double 1"), std::string::npos);
  EXPECT_THROW(write_vtk(s, mesh, "/nonexistent-dir/x.vtk"), IoError);
}

TEST(Vtk, ParseBackPhaseFromARun) {
  auto c = pff::testing::load_case("tension.ini");
  c.config.steps = 5;
  const State s0 = prepare_initial_state(c.config, c.disc, c.seed);
  const auto traj = run_evolution(c.config, c.disc, s0);
  const auto path = std::filesystem::temp_directory_path() / "pff_phase_test.vtk";
  write_vtk(traj.states.back(), c.disc.mesh, path.string());
  std::ifstream in(path);
  std::string line;
  std::size_t points = 0;
  while (std::getline(in, line) && line.rfind("POINTS", 0) != 0) {
  }
  std::istringstream(line.substr(7)) >> points;
  EXPECT_EQ(points, c.disc.node_count());
  while (std::getline(in, line) && line != "LOOKUP_TABLE default") {
  }
  std::size_t count = 0;
  double v = 0.0;
  while (in >> v) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    ++count;
  }
  EXPECT_EQ(count, points);
  std::filesystem::remove(path);
}

TEST(SweepCsv, HeaderAndRows) {
  SweepReport rep;
  rep.rows.resize(2);
  rep.rows[0].delta = 0.1;
  rep.rows[1].delta = 0.05;
  rep.rows[1].pairwise_distance_to_next = std::nan("");
  std::stringstream buf;
  write_sweep_csv(buf, rep);
  std::string header, r0, r1;
  std::getline(buf, header);
  std::getline(buf, r0);
  std::getline(buf, r1);
  EXPECT_EQ(header, kSweepHeader);
  EXPECT_EQ(r0.rfind("0.10000000000000001,", 0), 0u);
  EXPECT_EQ(r1.substr(r1.rfind(',') + 1), "nan");
}
