#include "pff/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pff {

VectorField BoundaryLoad::at(const TriMesh& mesh, double t) const {
  VectorField g(static_cast<Eigen::Index>(2 * mesh.node_count()));
  for (Index i = 0; i < mesh.node_count(); ++i) {
    const Point p = profile ? profile(mesh.node(i)) : Point::Zero();
    g[2 * i] = rate * t * p.x();
    g[2 * i + 1] = rate * t * p.y();
  }
  return g;
}

void EvolutionConfig::validate() const {
  if (!(T > 0.0)) throw std::invalid_argument("time horizon T must be positive");
  if (steps < 1) throw std::invalid_argument("step count must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("viscosity delta must be positive");
  if (tol.max_inner < 1) throw std::invalid_argument("max_inner must be >= 1");
  material.validate();
}

double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), kRelFloor});
}

namespace {

double stag_threshold(const ScalarField& z_prev, const EvolutionConfig& config,
                      const Discretization& disc) {
  return config.tol.stag_tol * (1.0 + h1_norm(z_prev, disc));
}

double penalized(const State& s, const ScalarField& z_prev, double rho, const Discretization& disc,
                 const MaterialModel& m) {
  return total_energy(s.u, s.z, disc, m).total + 0.5 * rho * l2_norm_sq(s.z - z_prev, disc);
}

bool is_monotone(const std::vector<double>& log) {
  for (std::size_t j = 1; j < log.size(); ++j) {
    if (log[j] > log[j - 1] + 1e-12 * (1.0 + std::abs(log[j - 1]))) return false;
  }
  return true;
}

}  // namespace

State prepare_initial_state(const EvolutionConfig& config, const Discretization& disc,
                            const ScalarField& z_seed) {
  const auto n = static_cast<Eigen::Index>(disc.node_count());
  if (z_seed.size() != n) throw std::invalid_argument("z_seed size does not match the mesh");
  if (z_seed.minCoeff() < 0.0 || z_seed.maxCoeff() > 1.0) {
    throw std::invalid_argument("z_seed must lie in [0, 1]");
  }
  const auto& m = config.material;
  const VectorField g0 = config.load.at(disc.mesh, 0.0);
  State s{VectorField::Zero(2 * n), z_seed};
  for (int it = 1; it <= config.tol.max_inner; ++it) {
    const State old = s;
    s.u = solve_u(s.z, g0, s.u, disc, m, config.tol.tol_u, config.tol.newton_cap).u;
    s.z = solve_z_unpenalized(s.u, s.z, disc, m, config.tol.tol_z, config.tol.newton_cap).z;
    const double inc = h1_norm(s.z - old.z, disc) + vector_h1_norm(s.u - old.u, disc);
    if (inc <= stag_threshold(old.z, config, disc) &&
        free_dof_residual(s.u, s.z, disc, m) <= config.tol.tol_u) {
      return s;
    }
  }
  throw StaggeredNonConvergence("initial state: alternate minimization did not reach a fixed point",
                                s, {}, 0.0);
}

StepRecord initial_record(const State& s, const EvolutionConfig& config, const Discretization& disc) {
  const auto& m = config.material;
  StepRecord r;
  const auto energy = total_energy(s.u, s.z, disc, m);
  r.F = energy.total;
  r.E = energy.elastic;
  r.D = energy.dissipation;
  r.slope = unilateral_slope(s.u, s.z, disc, m).value;
  r.equilibrium_residual = free_dof_residual(s.u, s.z, disc, m);
  r.kkt_residual = z_step_kkt_residual(s.u, s.z, s.z, 0.0, disc, m);
  r.min_z = s.z.minCoeff();
  return r;
}

StepRecord audit_step(const State& prev, const State& cur, int step, double t_prev, double t,
                      const EvolutionConfig& config, const Discretization& disc) {
  const auto& m = config.material;
  const double tau = t - t_prev;
  const double rho = config.delta / tau;
  StepRecord r;
  r.step = step;
  r.t = t;
  const auto energy = total_energy(cur.u, cur.z, disc, m);
  r.F = energy.total;
  r.E = energy.elastic;
  r.D = energy.dissipation;

  const ScalarField g = resolved_grad_z_F(cur.u, cur.z, disc, m);
  r.slope = slope_from_gradient(g, disc.lumped()).value;
  const ScalarField dz = cur.z - prev.z;
  const double dz_l2 = l2_norm(dz, disc);
  r.z_increment_sq = std::max(h1_norm_sq(dz, disc), 0.0);
  r.rate_L2 = dz_l2 / tau;
  r.rate_H1 = std::sqrt(r.z_increment_sq) / tau;

  r.slope_id_rel_err = relative_gap(r.slope, rho * dz_l2);
  r.align_rel_err = relative_gap(g.dot(dz), -r.slope * dz_l2);

  const VectorField dg = config.load.at(disc.mesh, t) - config.load.at(disc.mesh, t_prev);
  r.load_increment_sq = std::max(vector_h1_norm_sq(dg, disc), 0.0);
  r.power = power_P(prev.u, prev.z, dg / tau, disc, m);

  r.equilibrium_residual = free_dof_residual(cur.u, cur.z, disc, m);
  r.kkt_residual = z_step_kkt_residual(cur.u, cur.z, prev.z, rho, disc, m);
  r.min_z = cur.z.minCoeff();
  return r;
}

StepResult staggered_step(const State& prev, int step, double t_prev, double t,
                          const EvolutionConfig& config, const Discretization& disc) {
  const auto& m = config.material;
  const auto& tol = config.tol;
  const double tau = t - t_prev;
  const double rho = config.delta / tau;
  const VectorField g_t = config.load.at(disc.mesh, t);
  const double threshold = stag_threshold(prev.z, config, disc);

  StepResult out;
  State cur = prev;
  int sweeps = 0;
  double inc = 0.0;
  bool done = false;
  while (!done) {
    if (sweeps >= tol.max_inner) {
      throw StaggeredNonConvergence("step " + std::to_string(step) + ": inner loop exceeded " +
                                        std::to_string(tol.max_inner) + " sweeps (increment " +
                                        std::to_string(inc) + ")",
                                    cur, out.descent_log, inc);
    }
    ++sweeps;
    const State old = cur;
    cur.u = solve_u(cur.z, g_t, cur.u, disc, m, tol.tol_u, tol.newton_cap).u;
    out.descent_log.push_back(penalized(cur, prev.z, rho, disc, m));
    cur.z = solve_z(cur.u, prev.z, config.delta, tau, cur.z, disc, m, tol.tol_z, tol.newton_cap).z;
    out.descent_log.push_back(penalized(cur, prev.z, rho, disc, m));
    inc = h1_norm(cur.z - old.z, disc) + vector_h1_norm(cur.u - old.u, disc);
    done = inc <= threshold && free_dof_residual(cur.u, cur.z, disc, m) <= tol.tol_u;
  }

  out.record = audit_step(prev, cur, step, t_prev, t, config, disc);
  out.record.inner_iters = sweeps;
  out.record.descent_monotone = is_monotone(out.descent_log);
  out.state = std::move(cur);
  return out;
}

Trajectory run_evolution(const EvolutionConfig& config, const Discretization& disc,
                         const State& initial, const StepObserver& observer) {
  config.validate();
  Trajectory traj;
  traj.config = config;
  traj.times.push_back(0.0);
  traj.states.push_back(initial);
  traj.records.push_back(initial_record(initial, config, disc));
  if (observer) observer(traj.records.back(), initial);

  double arc = 0.0;
  for (int i = 1; i <= config.steps; ++i) {
    const double t_prev = config.time(i - 1);
    const double t = config.time(i);
    StepResult step;
    try {
      step = staggered_step(traj.states.back(), i, t_prev, t, config, disc);
    } catch (const StaggeredNonConvergence&) {
      throw;
    } catch (const NonConvergenceError& err) {
      throw NonConvergenceError("step " + std::to_string(i) + ": " + err.what(), err.best_iterate,
                                err.best_residual);
    }
    arc += std::sqrt(step.record.z_increment_sq);
    step.record.cum_arc_len = arc;
    if (!step.record.descent_monotone) {
      traj.warnings.push_back("step " + std::to_string(i) +
                              ": penalized energy increased along the inner loop");
    }
    if (step.record.min_z < -config.tol.tol_z) {
      traj.warnings.push_back("step " + std::to_string(i) + ": phase field below zero (min " +
                              std::to_string(step.record.min_z) + ")");
    }
    if (observer) observer(step.record, step.state);
    traj.times.push_back(t);
    traj.records.push_back(step.record);
    traj.states.push_back(std::move(step.state));
  }
  return traj;
}

EnergyAudit energy_inequality_report(const std::vector<StepRecord>& records, double delta, double tau) {
  EnergyAudit audit;
  if (records.empty()) return audit;
  const double f0 = records.front().F;
  audit.tolerance = 1e-8 * (1.0 + std::abs(f0));

  double bound = f0;
  double increments = 0.0;
  audit.rows.push_back({records.front().step, records.front().t, f0, f0, 0.0, 0.0, 0.0});
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& r = records[i];
    bound += tau * (-r.slope * r.slope / (2.0 * delta) - 0.5 * delta * r.rate_L2 * r.rate_L2 + r.power);
    increments += r.z_increment_sq + r.load_increment_sq;
    EnergyAuditRow row;
    row.step = r.step;
    row.t = r.t;
    row.F = r.F;
    row.bound = bound;
    row.slack_raw = bound - r.F;
    row.increment_sum = increments;
    audit.rows.push_back(row);
  }

  audit.min_slack_raw = 0.0;
  for (const auto& row : audit.rows) {
    audit.min_slack_raw = std::min(audit.min_slack_raw, row.slack_raw);
    if (row.slack_raw < 0.0 && row.increment_sum > 0.0) {
      audit.c_r = std::max(audit.c_r, -row.slack_raw / row.increment_sum);
    }
  }
  audit.min_slack_fitted = 0.0;
  for (auto& row : audit.rows) {
    row.slack_fitted = row.slack_raw + audit.c_r * row.increment_sum;
    audit.min_slack_fitted = std::min(audit.min_slack_fitted, row.slack_fitted);
    if (audit.first_violation < 0 && row.slack_fitted < -audit.tolerance) {
      audit.first_violation = row.step;
    }
  }
  audit.passed = audit.first_violation < 0;
  return audit;
}

EnergyAudit energy_inequality_report(const Trajectory& traj) {
  return energy_inequality_report(traj.records, traj.config.delta, traj.config.tau());
}

}  // namespace pff
