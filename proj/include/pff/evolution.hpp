#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pff/solvers.hpp"

namespace pff {

/// Dirichlet datum g(t, x) = rate * t * profile(x). The profile is also the
/// extension of the datum into the interior, used for the power term.
struct BoundaryLoad {
  std::function<Point(const Point&)> profile;
  double rate = 1.0;

  /// Nodal values of g(t) at every node (interleaved).
  VectorField at(const TriMesh& mesh, double t) const;
};

struct Tolerances {
  /// Inner loop stops once the combined H1 increment is below
  /// stag_tol * (1 + ||z_prev||_{H1,h}).
  double stag_tol = 1e-8;
  double tol_u = kDefaultTol;
  double tol_z = kDefaultTol;
  int max_inner = 2000;
  int newton_cap = kDefaultNewtonCap;
};

struct EvolutionConfig {
  double T = 1.0;
  int steps = 50;
  double delta = 0.05;
  BoundaryLoad load;
  MaterialModel material;
  Tolerances tol;

  double tau() const { return T / steps; }
  double time(int i) const { return i == steps ? T : tau() * i; }
  /// Throws std::invalid_argument unless T > 0, steps >= 1, delta > 0.
  void validate() const;
};

struct State {
  VectorField u;
  ScalarField z;
};

/// Per-step diagnostics. The first block is what the trace CSV carries.
struct StepRecord {
  int step = 0;
  double t = 0.0;
  double F = 0.0;
  double E = 0.0;
  double D = 0.0;
  double slope = 0.0;
  double rate_L2 = 0.0;
  double rate_H1 = 0.0;
  double power = 0.0;
  int inner_iters = 0;
  double slope_id_rel_err = 0.0;
  double align_rel_err = 0.0;
  double cum_arc_len = 0.0;

  double equilibrium_residual = 0.0;
  double kkt_residual = 0.0;
  /// ||z_i - z_{i-1}||^2_{H1,h} and ||g(t_i) - g(t_{i-1})||^2_{H1,h}.
  double z_increment_sq = 0.0;
  double load_increment_sq = 0.0;
  double min_z = 0.0;
  bool descent_monotone = true;
};

struct Trajectory {
  EvolutionConfig config;
  /// times[i], states[i], records[i] for i = 0..steps; index 0 is the initial state.
  std::vector<double> times;
  std::vector<State> states;
  std::vector<StepRecord> records;
  std::vector<std::string> warnings;

  const State& initial() const { return states.front(); }
};

/// Relative discrepancy |a - b| / max(|a|, |b|, kRelFloor).
inline constexpr double kRelFloor = 1e-10;
double relative_gap(double a, double b);

/// Inner loop failed to reach its stopping rule within max_inner sweeps.
class StaggeredNonConvergence : public NonConvergenceError {
 public:
  StaggeredNonConvergence(const std::string& what, State last, std::vector<double> log, double inc)
      : NonConvergenceError(what, last.z, inc), last_state(std::move(last)), descent_log(std::move(log)) {}

  State last_state;
  std::vector<double> descent_log;
};

/// Alternates the displacement solve at g(0) with the unpenalized
/// phase-field solve (bound: current iterate) until a joint fixed point.
State prepare_initial_state(const EvolutionConfig& config, const Discretization& disc,
                            const ScalarField& z_seed);

/// Computes every diagnostic of step i from the two end states.
StepRecord audit_step(const State& prev, const State& cur, int step, double t_prev, double t,
                      const EvolutionConfig& config, const Discretization& disc);

/// Record for the initial state (rates and power zero).
StepRecord initial_record(const State& s, const EvolutionConfig& config, const Discretization& disc);

struct StepResult {
  State state;
  StepRecord record;
  /// Penalized energy F(u_ij, z_ij) + delta/(2 tau)||z_ij - z_prev||^2, one entry per
  /// half-step (after each u-solve and each z-solve).
  std::vector<double> descent_log;
};

/// One time step: alternate minimization from (u_prev, z_prev) at time t.
StepResult staggered_step(const State& prev, int step, double t_prev, double t,
                          const EvolutionConfig& config, const Discretization& disc);

using StepObserver = std::function<void(const StepRecord&, const State&)>;

/// Runs all config.steps time steps from a prepared initial state.
Trajectory run_evolution(const EvolutionConfig& config, const Discretization& disc,
                         const State& initial, const StepObserver& observer = {});

struct EnergyAuditRow {
  int step = 0;
  double t = 0.0;
  double F = 0.0;
  /// F(u0,z0) - sum tau slope^2/(2 delta) - sum tau delta rate_L2^2 / 2 + sum tau power.
  double bound = 0.0;
  double slack_raw = 0.0;
  /// Cumulative sum of ||dz||^2_{H1,h} + ||dg||^2_{H1,h}.
  double increment_sum = 0.0;
  double slack_fitted = 0.0;
};

struct EnergyAudit {
  std::vector<EnergyAuditRow> rows;
  /// Smallest C_R >= 0 making every fitted slack nonnegative.
  double c_r = 0.0;
  double min_slack_raw = 0.0;
  double min_slack_fitted = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  /// First step whose fitted slack falls below -tolerance, or -1.
  int first_violation = -1;
};

/// Discrete energy inequality audit over a list of records (records[0] is
/// the initial state).
EnergyAudit energy_inequality_report(const std::vector<StepRecord>& records, double delta, double tau);
EnergyAudit energy_inequality_report(const Trajectory& traj);

}  // namespace pff
