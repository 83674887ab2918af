#include <algorithm>
#include <cmath>
#include <random>

#include "pff/oracle.hpp"
#include "pff/presets.hpp"

// The suite cross-checks the main solvers against the references in
// oracle.cpp, so unlike those it does call solve_u, solve_z and the
// staggered loop.
namespace pff::oracle {

namespace {

OracleVerdict verdict(std::string name, double value, double oracle, double err, double tol) {
  OracleVerdict v;
  v.name = std::move(name);
  v.value = value;
  v.oracle = oracle;
  v.abs_err = std::abs(value - oracle);
  v.rel_err = err;
  v.tolerance = tol;
  v.pass = err <= tol;
  return v;
}

Discretization unit_square(int cells, std::vector<Side> sides) {
  return Discretization(build_structured_mesh(cells, cells, 1.0, 1.0, side_markers(std::move(sides), 1.0, 1.0)));
}

EvolutionConfig probe_config(const MaterialModel& m) {
  EvolutionConfig c;
  c.T = 0.5;
  c.steps = 1;
  c.delta = 0.25;
  c.material = m;
  Eigen::Matrix2d A;
  A << 0.0, 0.5, 0.0, 1.0;
  c.load = affine_load(A, 2.0);
  c.tol.stag_tol = 1e-13;
  c.tol.max_inner = 5000;
  return c;
}

struct RandomState {
  std::mt19937_64 rng;
  explicit RandomState(std::uint64_t seed) : rng(seed) {}

  Eigen::VectorXd uniform(Eigen::Index n, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = d(rng);
    return v;
  }
};

double max_rel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).lpNorm<Eigen::Infinity>() / std::max(b.lpNorm<Eigen::Infinity>(), 1e-12);
}

}  // namespace

std::vector<OracleVerdict> run_oracle_suite(std::uint64_t seed) {
  std::vector<OracleVerdict> out;
  RandomState rs(seed);
  const MaterialModel m = MaterialModel::standard(1.0, 1.5);

  {
    // Box QP with a closed-form solution: clamp(b / d, 0, 1).
    const Eigen::VectorXd d = rs.uniform(6, 0.5, 3.0);
    const Eigen::VectorXd b = rs.uniform(6, -2.0, 4.0);
    const ScalarFn fn = [&](const Eigen::VectorXd& x) { return 0.5 * x.dot(d.cwiseProduct(x)) - b.dot(x); };
    const GradientFn gr = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return d.cwiseProduct(x) - b; };
    const auto res = projected_gradient(fn, gr, Eigen::VectorXd::Zero(6), Eigen::VectorXd::Zero(6),
                                        Eigen::VectorXd::Ones(6));
    const Eigen::VectorXd exact = b.cwiseQuotient(d).cwiseMax(0.0).cwiseMin(1.0);
    out.push_back(verdict("pg_box_qp", res.value, fn(exact), (res.x - exact).lpNorm<Eigen::Infinity>(), 1e-8));
  }

  for (int cells : {1, 2}) {
    const Discretization disc = unit_square(cells, {Side::left});
    const auto n = static_cast<Eigen::Index>(disc.node_count());
    const std::string tag = "_mesh" + std::to_string(2 * cells * cells);
    double err_z = 0.0, err_u = 0.0, norm_z = 0.0, norm_u = 0.0;
    for (int k = 0; k < 20; ++k) {
      const VectorField u = rs.uniform(2 * n, -0.3, 0.3);
      const ScalarField z = rs.uniform(n, 0.0, 1.0);
      const ScalarField gz = grad_z_F(u, z, disc, m);
      const ScalarField fz = fd_gradient([&](const Eigen::VectorXd& w) { return total_energy(u, w, disc, m).total; }, z,
                                         1e-6);
      const VectorField gu = residual_u(u, z, disc, m);
      const VectorField fu = fd_gradient([&](const Eigen::VectorXd& w) { return elastic_energy(w, z, disc, m); }, u,
                                         1e-6);
      err_z = std::max(err_z, max_rel(gz, fz));
      err_u = std::max(err_u, max_rel(gu, fu));
      norm_z = std::max(norm_z, gz.norm());
      norm_u = std::max(norm_u, gu.norm());
    }
    out.push_back(verdict("grad_z_F_fd" + tag, norm_z, norm_z, err_z, 1e-6));
    out.push_back(verdict("residual_u_fd" + tag, norm_u, norm_u, err_u, 1e-6));
  }

  {
    const Discretization disc = unit_square(2, {Side::left});
    const Eigen::MatrixXd M = disc.lumped().asDiagonal();
    double err = 0.0, last = 0.0, last_qp = 0.0;
    for (int k = 0; k < 50; ++k) {
      const ScalarField g = rs.uniform(static_cast<Eigen::Index>(disc.node_count()), -1.0, 1.0);
      const double closed = slope_from_gradient(g, disc.lumped()).value;
      const double qp = slope_qp(g, M);
      err = std::max(err, std::abs(closed - qp) / std::max(qp, 1e-300));
      last = closed;
      last_qp = qp;
    }
    out.push_back(verdict("slope_qp_equivalence", last, last_qp, err, 1e-8));
  }

  {
    const Discretization disc = unit_square(2, {Side::left});
    const auto n = static_cast<Eigen::Index>(disc.node_count());
    const VectorField u = rs.uniform(2 * n, -0.5, 0.5);
    const ScalarField z_prev = rs.uniform(n, 0.3, 1.0);
    const double delta = 0.05, tau = 0.025;
    const auto main = solve_z(u, z_prev, delta, tau, z_prev, disc, m);
    const auto ref = z_step_by_projected_gradient(u, z_prev, delta / tau, disc, m);
    out.push_back(verdict("z_step_vs_projected_gradient", main.z.sum(), ref.x.sum(),
                          (main.z - ref.x).lpNorm<Eigen::Infinity>(), 1e-8));
  }

  {
    const Discretization disc = unit_square(1, {Side::left});
    const EvolutionConfig c = probe_config(m);
    const ScalarField seed_z = ScalarField::Constant(4, 0.8);
    const State s0 = prepare_initial_state(c, disc, seed_z);
    const auto step = staggered_step(s0, 1, 0.0, c.T, c, disc);
    out.push_back(joint_descent_probe(step.state, s0.z, c.T, c.T, c, disc, 8, seed));
  }

  {
    MaterialModel mc = m;
    mc.h = constant_degradation(1.0);
    const Discretization disc = unit_square(1, {Side::left});
    const EvolutionConfig c = probe_config(mc);
    const ScalarField z_prev = ScalarField::Constant(4, 0.9);
    const State s0{VectorField::Zero(8), z_prev};
    const auto step = staggered_step(s0, 1, 0.0, c.T, c, disc);
    const State exact = decoupled_exact_pair(z_prev, c.T, c.T, c, disc);
    const double err = std::max((step.state.u - exact.u).lpNorm<Eigen::Infinity>(),
                                (step.state.z - exact.z).lpNorm<Eigen::Infinity>());
    out.push_back(verdict("decoupled_exact_pair", step.state.z.sum(), exact.z.sum(), err, 1e-8));
  }
  return out;
}

}  // namespace pff::oracle
