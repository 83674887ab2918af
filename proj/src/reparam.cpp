#include "pff/reparam.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

namespace pff {

double ReparamTrajectory::knot_normalization_error() const {
  double err = 0.0;
  for (std::size_t i = 0; i < interval_dt_ds.size(); ++i) {
    err = std::max(err, std::abs(interval_dt_ds[i] + interval_dz_H1[i] - 1.0));
  }
  return err;
}

double ReparamTrajectory::grid_normalization_max(const Discretization& disc) const {
  double worst = 0.0;
  for (std::size_t j = 0; j + 1 < s.size(); ++j) {
    const double tprime = (t[j + 1] - t[j]) / ds;
    const double zprime = h1_norm(z[j + 1] - z[j], disc) / ds;
    worst = std::max(worst, tprime + zprime);
  }
  return worst;
}

ReparamTrajectory reparametrize(const Trajectory& traj, const Discretization& disc, double s_max,
                                int n_intervals) {
  if (traj.states.empty() || traj.records.size() != traj.states.size()) {
    throw std::invalid_argument("reparametrize: empty or inconsistent trajectory");
  }
  if (n_intervals < 1) throw std::invalid_argument("reparametrize: need at least one grid interval");
  const auto& m = traj.config.material;
  const std::size_t k = traj.states.size() - 1;

  ReparamTrajectory rt;
  rt.delta = traj.config.delta;
  rt.knot_sigma.assign(k + 1, 0.0);
  rt.knot_t = traj.times;
  rt.knot_slope.assign(k + 1, 0.0);
  rt.knot_pde_residual.assign(k + 1, 0.0);
  rt.knot_alignment_err.assign(k + 1, 0.0);
  rt.knot_direction_err.assign(k + 1, 0.0);

  for (std::size_t i = 0; i <= k; ++i) {
    const State& st = traj.states[i];
    const ScalarField g = resolved_grad_z_F(st.u, st.z, disc, m);
    const SlopeResult slope = slope_from_gradient(g, disc.lumped());
    rt.knot_slope[i] = slope.value;
    double pde = 0.0;
    for (Eigen::Index p = 0; p < g.size(); ++p) pde = std::max(pde, std::max(g[p], 0.0) / disc.lumped()[p]);
    rt.knot_pde_residual[i] = pde;
    if (i == 0) continue;

    const ScalarField dz = st.z - traj.states[i - 1].z;
    const double tau = traj.times[i] - traj.times[i - 1];
    const double len = std::sqrt(std::max(h1_norm_sq(dz, disc), 0.0));
    const double len_l2 = l2_norm(dz, disc);
    const double dsigma = tau + len;
    rt.knot_sigma[i] = rt.knot_sigma[i - 1] + dsigma;
    rt.interval_dt_ds.push_back(tau / dsigma);
    rt.interval_dz_H1.push_back(len / dsigma);
    rt.interval_dz_L2.push_back(len_l2 / dsigma);

    if (len_l2 > 0.0) {
      rt.knot_alignment_err[i] = relative_gap(g.dot(dz), -slope.value * len_l2);
      ScalarField v = slope.value * dz;
      for (Eigen::Index p = 0; p < g.size(); ++p) {
        v[p] += len_l2 * std::max(g[p], 0.0) / disc.lumped()[p];
      }
      rt.knot_direction_err[i] = l2_norm(v, disc) / std::max(slope.value * len_l2, kRelFloor);
    }
  }
  rt.sigma_end = rt.knot_sigma.back();

  if (s_max <= 0.0) s_max = rt.sigma_end;
  if (s_max < rt.sigma_end) throw std::invalid_argument("reparametrize: s_max below sigma(T)");
  rt.ds = s_max / n_intervals;

  const auto npts = static_cast<std::size_t>(n_intervals) + 1;
  rt.s.reserve(npts);
  for (std::size_t j = 0; j < npts; ++j) {
    const double s = j + 1 == npts ? s_max : rt.ds * static_cast<double>(j);
    rt.s.push_back(s);
    if (k == 0 || s >= rt.sigma_end) {
      rt.t.push_back(traj.times.back());
      rt.z.push_back(traj.states.back().z);
      rt.u.push_back(traj.states.back().u);
      rt.dt_ds.push_back(0.0);
      rt.dz_H1.push_back(0.0);
      rt.dz_L2.push_back(0.0);
      rt.slope.push_back(rt.knot_slope.back());
      rt.pde_residual.push_back(rt.knot_pde_residual.back());
      continue;
    }
    // interval i with sigma_{i-1} <= s < sigma_i
    const auto it = std::upper_bound(rt.knot_sigma.begin(), rt.knot_sigma.end(), s);
    const auto i = static_cast<std::size_t>(it - rt.knot_sigma.begin());
    const double theta = (s - rt.knot_sigma[i - 1]) / (rt.knot_sigma[i] - rt.knot_sigma[i - 1]);
    const State& a = traj.states[i - 1];
    const State& b = traj.states[i];
    rt.t.push_back(traj.times[i - 1] + theta * (traj.times[i] - traj.times[i - 1]));
    rt.z.push_back(a.z + theta * (b.z - a.z));
    rt.u.push_back(a.u + theta * (b.u - a.u));
    rt.dt_ds.push_back(rt.interval_dt_ds[i - 1]);
    rt.dz_H1.push_back(rt.interval_dz_H1[i - 1]);
    rt.dz_L2.push_back(rt.interval_dz_L2[i - 1]);
    rt.slope.push_back(rt.knot_slope[i]);
    rt.pde_residual.push_back(rt.knot_pde_residual[i]);
  }
  return rt;
}

StationarityReport stationarity_check(const ReparamTrajectory& rt, double plateau_eps) {
  StationarityReport rep;
  rep.plateau_eps = plateau_eps;
  for (std::size_t j = 0; j < rt.s.size(); ++j) {
    if (rt.s[j] >= rt.sigma_end) continue;  // constant extension carries no motion
    if (rt.dt_ds[j] <= plateau_eps) {
      ++rep.plateau_points;
      continue;
    }
    ++rep.advancing_points;
    rep.max_advancing_slope = std::max(rep.max_advancing_slope, rt.slope[j]);
    rep.max_advancing_pde_residual = std::max(rep.max_advancing_pde_residual, rt.pde_residual[j]);
  }
  for (std::size_t i = 0; i < rt.knot_alignment_err.size(); ++i) {
    rep.max_alignment_err = std::max(rep.max_alignment_err, rt.knot_alignment_err[i]);
    rep.max_direction_err = std::max(rep.max_direction_err, rt.knot_direction_err[i]);
  }
  return rep;
}

SweepReport delta_sweep(const EvolutionConfig& config, const Discretization& disc,
                        const State& initial, const std::vector<double>& deltas,
                        const SweepOptions& options) {
  if (deltas.empty()) throw std::invalid_argument("delta sweep needs at least one delta");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) throw std::invalid_argument("delta sweep: every delta must be positive");
    if (i > 0 && !(deltas[i] < deltas[i - 1])) {
      throw std::invalid_argument("delta sweep: deltas must be strictly descending");
    }
  }

  std::vector<EvolutionConfig> configs;
  for (double d : deltas) {
    EvolutionConfig c = config;
    c.delta = d;
    if (options.tau_ratio > 0.0) {
      c.steps = std::max(1, static_cast<int>(std::ceil(config.T / (options.tau_ratio * d) - 1e-9)));
    }
    if (c.tau() > d * (1.0 + 1e-12)) {
      throw std::invalid_argument("delta sweep: tau = " + std::to_string(c.tau()) +
                                  " exceeds delta = " + std::to_string(d));
    }
    configs.push_back(std::move(c));
  }

  SweepReport report;
  report.trajectories.resize(deltas.size());
  if (options.parallel && deltas.size() > 1) {
    std::vector<std::future<Trajectory>> jobs;
    for (const auto& c : configs) {
      jobs.push_back(std::async(std::launch::async,
                                [&disc, &initial, c] { return run_evolution(c, disc, initial); }));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) report.trajectories[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < configs.size(); ++i) {
      report.trajectories[i] = run_evolution(configs[i], disc, initial);
    }
  }

  // Common grid covering the longest curve.
  double s_max = 0.0;
  for (const auto& traj : report.trajectories) {
    double sigma = traj.times.back();
    for (std::size_t i = 1; i < traj.records.size(); ++i) sigma += std::sqrt(traj.records[i].z_increment_sq);
    s_max = std::max(s_max, sigma);
  }
  s_max *= 1.0 + 1e-12;
  report.s_max = s_max;

  for (const auto& traj : report.trajectories) {
    report.reparams.push_back(reparametrize(traj, disc, s_max, options.grid_intervals));
  }

  double s_lo = std::numeric_limits<double>::infinity(), s_hi = 0.0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const auto& rt = report.reparams[i];
    SweepRow row;
    row.delta = deltas[i];
    row.steps = configs[i].steps;
    row.arc_length = rt.sigma_end;
    row.max_norm_residual = rt.grid_normalization_max(disc) - 1.0;
    row.stationarity = stationarity_check(rt, options.plateau_eps);
    row.max_advancing_slope = row.stationarity.max_advancing_slope;
    row.pairwise_distance_to_next = std::numeric_limits<double>::quiet_NaN();
    if (i + 1 < deltas.size()) {
      const auto& other = report.reparams[i + 1];
      double dist = 0.0;
      for (std::size_t j = 0; j < rt.s.size(); ++j) dist = std::max(dist, l2_norm(rt.z[j] - other.z[j], disc));
      row.pairwise_distance_to_next = dist;
    }
    if (i > 0) report.growth = std::max(report.growth, row.arc_length / report.rows.back().arc_length);
    s_lo = std::min(s_lo, row.arc_length);
    s_hi = std::max(s_hi, row.arc_length);
    report.rows.push_back(row);
  }
  report.arc_length_spread = s_hi / s_lo;
  return report;
}

}  // namespace pff
