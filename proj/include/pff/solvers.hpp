#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pff/energy.hpp"

namespace pff {

struct SolveStats {
  int iterations = 0;
  double final_residual = 0.0;
  std::size_t active_set_size = 0;
  bool converged = false;
};

/// Raised when a Newton loop hits its iteration cap or stalls. Carries the
/// best iterate seen.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, Eigen::VectorXd best, double residual)
      : std::runtime_error(what), best_iterate(std::move(best)), best_residual(residual) {}

  Eigen::VectorXd best_iterate;
  double best_residual;
};

/// The displacement problem has no Dirichlet dofs and is not coercive.
class CoercivityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct USolveResult {
  VectorField u;
  SolveStats stats;
};

struct ZSolveResult {
  ScalarField z;
  SolveStats stats;
  /// KKT multipliers of the bound z <= z_prev (zero off the active set).
  ScalarField multipliers;
  double min_value = 0.0;
};

inline constexpr double kDefaultTol = 1e-9;
inline constexpr int kDefaultNewtonCap = 50;

/// true for every displacement dof prescribed by a Dirichlet edge.
std::vector<bool> dirichlet_dof_mask(const TriMesh& mesh);

/// ||residual_u restricted to free dofs||_inf.
double free_dof_residual(const VectorField& u, const ScalarField& z, const Discretization& disc,
                         const MaterialModel& m);

/// Minimizes the elastic energy in u with z frozen and u = g_t on Dirichlet
/// dofs. Semismooth Newton on the piecewise-linear stress with a
/// backtracking line search on the energy. Only the Dirichlet entries of
/// g_t are read.
USolveResult solve_u(const ScalarField& z, const VectorField& g_t, const VectorField& u_init,
                     const Discretization& disc, const MaterialModel& m, double tol = kDefaultTol,
                     int max_iter = kDefaultNewtonCap);

/// Objective of the phase-field step,
///   F(u, z) + rho/2 ||z - z_prev||^2_{L2,h},   rho = delta / tau.
double z_step_objective(const VectorField& u, const ScalarField& z, const ScalarField& z_prev,
                        double rho, const Discretization& disc, const MaterialModel& m);

/// KKT residual of the phase-field step: max over nodes of the stationarity
/// violation (G_i)_+ and the complementarity violation (-G_i)_+ (z_prev_i - z_i),
/// with G the gradient of z_step_objective.
double z_step_kkt_residual(const VectorField& u, const ScalarField& z, const ScalarField& z_prev,
                           double rho, const Discretization& disc, const MaterialModel& m);

/// argmin F(u, z) + delta/(2 tau) ||z - z_prev||^2 subject to z <= z_prev,
/// by projected Newton with an epsilon-active set. An infeasible z_init is
/// projected.
ZSolveResult solve_z(const VectorField& u, const ScalarField& z_prev, double delta, double tau,
                     const ScalarField& z_init, const Discretization& disc, const MaterialModel& m,
                     double tol = kDefaultTol, int max_iter = kDefaultNewtonCap);

/// solve_z with delta = 0, started from z_prev.
ZSolveResult solve_z_unpenalized(const VectorField& u, const ScalarField& z_prev,
                                 const Discretization& disc, const MaterialModel& m,
                                 double tol = kDefaultTol, int max_iter = kDefaultNewtonCap);

}  // namespace pff
