#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pff/evolution.hpp"

// Brute-force references for the main solvers. Nothing here calls
// solve_u, solve_z or the staggered loop; only the energy evaluation is
// shared.
namespace pff::oracle {

using ScalarFn = std::function<double(const Eigen::VectorXd&)>;
using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct OracleVerdict {
  std::string name;
  double value = 0.0;
  double oracle = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Relative comparison |value - oracle| / max(|oracle|, floor) <= tol.
OracleVerdict compare(std::string name, double value, double oracle, double tol, double floor = 1e-300);

/// Central differences per dof.
Eigen::VectorXd fd_gradient(const ScalarFn& fn, const Eigen::VectorXd& x, double step);

/// Power iteration on finite-difference Hessian-vector products.
double estimate_lipschitz(const GradientFn& grad, const Eigen::VectorXd& x, int iterations = 60);

struct ProjectedGradientOptions {
  /// 0 means estimate by power iteration at the start point.
  double lipschitz = 0.0;
  long max_iter = 1'000'000;
  /// Stop when ||x - P(x - grad)||_inf falls below this.
  double tol = 1e-10;
};

struct ProjectedGradientResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double projected_gradient_norm = 0.0;
  long iterations = 0;
  bool converged = false;
};

/// Projected gradient descent on lower <= x <= upper with step 1/L and an
/// Armijo safeguard (the step is halved whenever the objective rises).
ProjectedGradientResult projected_gradient(const ScalarFn& fn, const GradientFn& grad,
                                           Eigen::VectorXd x0, const Eigen::VectorXd& lower,
                                           const Eigen::VectorXd& upper,
                                           const ProjectedGradientOptions& options = {});

/// sqrt(g^T w*) with w* = argmin 1/2 w^T M w - g^T w over w >= 0, solved by
/// long-run projected gradient. Throws std::invalid_argument for non-SPD M.
double slope_qp(const Eigen::VectorXd& g, const Eigen::MatrixXd& M);

/// Minimizes the phase-field step objective by projected gradient (long run).
ProjectedGradientResult z_step_by_projected_gradient(const VectorField& u, const ScalarField& z_prev,
                                                     double rho, const Discretization& disc,
                                                     const MaterialModel& m,
                                                     const ProjectedGradientOptions& options = {});

inline constexpr std::size_t kProbeMaxDofs = 12;

/// Local descent probe around a staggered fixed point of step (z_prev, t).
/// Passes when no perturbed projected-gradient run on the joint penalized
/// objective finds a value lower by more than 1e-8 (1 + |F|) and both
/// partial KKT certificates hold. Refuses meshes with more than 12 dofs.
OracleVerdict joint_descent_probe(const State& fixed_point, const ScalarField& z_prev, double t,
                                  double tau, const EvolutionConfig& config,
                                  const Discretization& disc, int n_starts, std::uint64_t seed,
                                  double perturbation = 1e-2);

/// Exact staggered fixed point when h is constant (u and z decouple): the
/// displacement comes from a dense linear solve, the phase field from
/// enumerating every active set of the obstacle problem. Needs quadratic f.
State decoupled_exact_pair(const ScalarField& z_prev, double t, double tau,
                           const EvolutionConfig& config, const Discretization& disc);

/// CSV with header name,value,oracle,err,pass.
void write_verdicts(std::ostream& out, const std::vector<OracleVerdict>& verdicts);

/// Built-in oracle suite (quadratic self-checks, gradient checks on the 2-
/// and 8-triangle meshes, slope equivalence, z-step and fixed-point
/// oracles). Deterministic for a given seed.
std::vector<OracleVerdict> run_oracle_suite(std::uint64_t seed);

}  // namespace pff::oracle
