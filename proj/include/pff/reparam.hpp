#pragma once

#include <vector>

#include "pff/evolution.hpp"

namespace pff {

/// A trajectory resampled in the arc-length variable
///   sigma(t) = t + int_0^t ||z'||_{H1,h},
/// on a uniform s-grid. Fields are piecewise linear in s between the knots
/// sigma_i and constant past sigma(T).
struct ReparamTrajectory {
  double delta = 0.0;
  double sigma_end = 0.0;

  // Knots, i = 0..k.
  std::vector<double> knot_sigma;
  std::vector<double> knot_t;
  std::vector<double> knot_slope;
  /// max_i (g_i)_+ / m_i, the nodal density of the positive z-gradient.
  std::vector<double> knot_pde_residual;
  /// Alignment slope ||dz||_{L2} + dF/dz[dz] (relative), and the direction
  /// property dz * slope = -||dz|| (g)_+/m (relative, L2). Zero at knot 0
  /// and wherever z did not move.
  std::vector<double> knot_alignment_err;
  std::vector<double> knot_direction_err;

  // Intervals (sigma_{i-1}, sigma_i), i = 1..k, stored at index i - 1.
  std::vector<double> interval_dt_ds;
  std::vector<double> interval_dz_H1;
  std::vector<double> interval_dz_L2;

  // Uniform grid.
  double ds = 0.0;
  std::vector<double> s;
  std::vector<double> t;
  std::vector<ScalarField> z;
  std::vector<VectorField> u;
  std::vector<double> dt_ds;
  std::vector<double> dz_H1;
  std::vector<double> dz_L2;
  std::vector<double> slope;
  std::vector<double> pde_residual;

  /// max over intervals of |t' + ||z'||_{H1,h} - 1| at knot level.
  double knot_normalization_error() const;
  /// max over grid cells of the finite-difference t' + ||z'||_{H1,h}.
  double grid_normalization_max(const Discretization& disc) const;
};

inline constexpr int kDefaultGridIntervals = 2000;

/// Builds sigma knots from the trajectory and resamples on [0, s_max] with
/// n_intervals cells. s_max <= 0 means sigma(T).
ReparamTrajectory reparametrize(const Trajectory& traj, const Discretization& disc,
                                double s_max = 0.0, int n_intervals = kDefaultGridIntervals);

struct StationarityReport {
  double plateau_eps = 0.0;
  int advancing_points = 0;
  int plateau_points = 0;
  double max_advancing_slope = 0.0;
  double max_advancing_pde_residual = 0.0;
  double max_alignment_err = 0.0;
  double max_direction_err = 0.0;
};

inline constexpr double kDefaultPlateauEps = 1e-3;

/// Splits the grid into plateau points (t' <= plateau_eps) and advancing
/// points and reports slope and residual maxima over the advancing set.
StationarityReport stationarity_check(const ReparamTrajectory& rt, double plateau_eps = kDefaultPlateauEps);

struct SweepOptions {
  /// When positive, each delta runs with tau = tau_ratio * delta; otherwise
  /// config.steps is used for every delta.
  double tau_ratio = 0.0;
  int grid_intervals = kDefaultGridIntervals;
  double plateau_eps = kDefaultPlateauEps;
  bool parallel = true;
};

struct SweepRow {
  double delta = 0.0;
  int steps = 0;
  double arc_length = 0.0;
  double max_norm_residual = 0.0;
  double max_advancing_slope = 0.0;
  /// sup_s ||z_delta(s) - z_next(s)||_{L2,h}; NaN for the last delta.
  double pairwise_distance_to_next = 0.0;
  StationarityReport stationarity;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<Trajectory> trajectories;
  std::vector<ReparamTrajectory> reparams;
  double s_max = 0.0;
  /// max over consecutive deltas of S_{next} / S_{delta}.
  double growth = 0.0;
  /// max S / min S over the sweep.
  double arc_length_spread = 0.0;
};

/// Runs one evolution per delta (descending, all > 0), reparametrizes each
/// on a common s-grid and reports arc lengths, Cauchy distances and
/// stationarity diagnostics. Throws std::invalid_argument when some
/// tau exceeds its delta.
SweepReport delta_sweep(const EvolutionConfig& config, const Discretization& disc,
                        const State& initial, const std::vector<double>& deltas,
                        const SweepOptions& options = {});

}  // namespace pff
