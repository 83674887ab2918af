#include "pff/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include "pff/presets.hpp"

namespace pff::oracle {

OracleVerdict compare(std::string name, double value, double oracle, double tol, double floor) {
  OracleVerdict v;
  v.name = std::move(name);
  v.value = value;
  v.oracle = oracle;
  v.abs_err = std::abs(value - oracle);
  v.rel_err = v.abs_err / std::max(std::abs(oracle), floor);
  v.tolerance = tol;
  v.pass = v.rel_err <= tol;
  return v;
}

Eigen::VectorXd fd_gradient(const ScalarFn& fn, const Eigen::VectorXd& x, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("fd_gradient: step must be positive");
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    xp[i] = xi + step;
    const double fp = fn(xp);
    xp[i] = xi - step;
    const double fm = fn(xp);
    xp[i] = xi;
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

double estimate_lipschitz(const GradientFn& grad, const Eigen::VectorXd& x, int iterations) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(x.size()).normalized();
  double lambda = 0.0;
  const double h = 1e-6 * (1.0 + x.norm());
  for (int k = 0; k < iterations; ++k) {
    const Eigen::VectorXd hv = (grad(x + h * v) - grad(x - h * v)) / (2.0 * h);
    const double nrm = hv.norm();
    if (nrm == 0.0) break;
    lambda = nrm;
    v = hv / nrm;
  }
  return lambda;
}

ProjectedGradientResult projected_gradient(const ScalarFn& fn, const GradientFn& grad,
                                           Eigen::VectorXd x0, const Eigen::VectorXd& lower,
                                           const Eigen::VectorXd& upper,
                                           const ProjectedGradientOptions& options) {
  const auto project = [&](const Eigen::VectorXd& y) { return y.cwiseMax(lower).cwiseMin(upper); };
  ProjectedGradientResult res;
  res.x = project(x0);
  double lip = options.lipschitz > 0.0 ? options.lipschitz : estimate_lipschitz(grad, res.x);
  if (!(lip > 0.0)) lip = 1.0;
  double step = 1.0 / lip;

  double f = fn(res.x);
  Eigen::VectorXd g = grad(res.x);
  for (res.iterations = 0; res.iterations < options.max_iter; ++res.iterations) {
    res.projected_gradient_norm = (res.x - project(res.x - g)).lpNorm<Eigen::Infinity>();
    if (res.projected_gradient_norm <= options.tol) {
      res.converged = true;
      break;
    }
    const Eigen::VectorXd trial = project(res.x - step * g);
    const double ft = fn(trial);
    if (ft > f + 1e-15 * (1.0 + std::abs(f))) {
      step *= 0.5;
      if (step < 1e-30) break;
      continue;
    }
    res.x = trial;
    f = ft;
    g = grad(res.x);
  }
  res.value = f;
  return res;
}

double slope_qp(const Eigen::VectorXd& g, const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols() || M.rows() != g.size()) {
    throw std::invalid_argument("slope_qp: dimension mismatch");
  }
  if (!M.isApprox(M.transpose(), 1e-14)) throw std::invalid_argument("slope_qp: M not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("slope_qp: M is not SPD");

  const ScalarFn fn = [&](const Eigen::VectorXd& w) { return 0.5 * w.dot(M * w) - g.dot(w); };
  const GradientFn grad = [&](const Eigen::VectorXd& w) -> Eigen::VectorXd { return M * w - g; };
  const Eigen::VectorXd lower = Eigen::VectorXd::Zero(g.size());
  const Eigen::VectorXd upper = Eigen::VectorXd::Constant(g.size(), std::numeric_limits<double>::infinity());
  ProjectedGradientOptions opt;
  opt.tol = 1e-15 * (1.0 + g.lpNorm<Eigen::Infinity>());
  const auto res = projected_gradient(fn, grad, Eigen::VectorXd::Zero(g.size()), lower, upper, opt);
  return std::sqrt(std::max(g.dot(res.x), 0.0));
}

ProjectedGradientResult z_step_by_projected_gradient(const VectorField& u, const ScalarField& z_prev,
                                                     double rho, const Discretization& disc,
                                                     const MaterialModel& m,
                                                     const ProjectedGradientOptions& options) {
  const ScalarFn fn = [&](const Eigen::VectorXd& z) {
    return total_energy(u, z, disc, m).total + 0.5 * rho * l2_norm_sq(z - z_prev, disc);
  };
  const GradientFn grad = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    return grad_z_F(u, z, disc, m) + rho * disc.lumped().cwiseProduct(z - z_prev);
  };
  const Eigen::VectorXd lower =
      Eigen::VectorXd::Constant(z_prev.size(), -std::numeric_limits<double>::infinity());
  return projected_gradient(fn, grad, z_prev, lower, z_prev, options);
}

namespace {

// Certificates recomputed from the energy module only.
double equilibrium_certificate(const State& s, const Discretization& disc, const MaterialModel& m) {
  const VectorField r = residual_u(s.u, s.z, disc, m);
  std::vector<bool> fixed(static_cast<std::size_t>(r.size()), false);
  for (Index i : disc.mesh.dirichlet_nodes()) fixed[2 * i] = fixed[2 * i + 1] = true;
  double res = 0.0;
  for (Eigen::Index k = 0; k < r.size(); ++k) {
    if (!fixed[static_cast<std::size_t>(k)]) res = std::max(res, std::abs(r[k]));
  }
  return res;
}

double phase_certificate(const State& s, const ScalarField& z_prev, double rho,
                         const Discretization& disc, const MaterialModel& m) {
  const ScalarField g = grad_z_F(s.u, s.z, disc, m) + rho * disc.lumped().cwiseProduct(s.z - z_prev);
  double res = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    res = std::max({res, std::max(g[i], 0.0), std::max(-g[i], 0.0) * (z_prev[i] - s.z[i])});
  }
  return res;
}

}  // namespace

OracleVerdict joint_descent_probe(const State& fixed_point, const ScalarField& z_prev, double t,
                                  double tau, const EvolutionConfig& config,
                                  const Discretization& disc, int n_starts, std::uint64_t seed,
                                  double perturbation) {
  const auto n = static_cast<Eigen::Index>(disc.node_count());
  if (static_cast<std::size_t>(3 * n) > kProbeMaxDofs) {
    throw std::invalid_argument("joint_descent_probe: mesh too large for the oracle (" +
                                std::to_string(3 * n) + " dofs)");
  }
  const auto& m = config.material;
  const double rho = config.delta / tau;
  const VectorField g_t = config.load.at(disc.mesh, t);

  const auto split = [n](const Eigen::VectorXd& x) {
    return State{x.head(2 * n), x.tail(n)};
  };
  const ScalarFn fn = [&](const Eigen::VectorXd& x) {
    const State s = split(x);
    return total_energy(s.u, s.z, disc, m).total + 0.5 * rho * l2_norm_sq(s.z - z_prev, disc);
  };
  const GradientFn grad = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const State s = split(x);
    Eigen::VectorXd out(3 * n);
    out.head(2 * n) = residual_u(s.u, s.z, disc, m);
    out.tail(n) = grad_z_F(s.u, s.z, disc, m) + rho * disc.lumped().cwiseProduct(s.z - z_prev);
    return out;
  };

  const double inf = std::numeric_limits<double>::infinity();
  Eigen::VectorXd lower = Eigen::VectorXd::Constant(3 * n, -inf);
  Eigen::VectorXd upper = Eigen::VectorXd::Constant(3 * n, inf);
  for (Index i : disc.mesh.dirichlet_nodes()) {
    for (int c = 0; c < 2; ++c) {
      lower[2 * i + c] = upper[2 * i + c] = g_t[2 * i + c];
    }
  }
  upper.tail(n) = z_prev;

  Eigen::VectorXd x_star(3 * n);
  x_star << fixed_point.u, fixed_point.z;
  const double f_star = fn(x_star);
  const double F_star = total_energy(fixed_point.u, fixed_point.z, disc, m).total;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double best = f_star;
  ProjectedGradientOptions opt;
  opt.max_iter = 200'000;
  for (int k = 0; k < n_starts; ++k) {
    Eigen::VectorXd x0 = x_star;
    for (Eigen::Index i = 0; i < x0.size(); ++i) x0[i] += perturbation * normal(rng);
    const auto res = projected_gradient(fn, grad, x0, lower, upper, opt);
    best = std::min(best, res.value);
  }

  const double eq = equilibrium_certificate(fixed_point, disc, m);
  const double kkt = phase_certificate(fixed_point, z_prev, rho, disc, m);
  OracleVerdict v;
  v.name = "joint_descent_probe";
  v.value = f_star;
  v.oracle = best;
  v.abs_err = std::max(f_star - best, 0.0);
  v.tolerance = 1e-8 * (1.0 + std::abs(F_star));
  v.rel_err = v.abs_err / (1.0 + std::abs(F_star));
  v.pass = v.abs_err <= v.tolerance && eq <= config.tol.tol_u && kkt <= config.tol.tol_z;
  return v;
}

State decoupled_exact_pair(const ScalarField& z_prev, double t, double tau,
                           const EvolutionConfig& config, const Discretization& disc) {
  const auto& m = config.material;
  for (double z : {-0.5, 0.0, 0.3, 1.0, 1.7}) {
    if (m.h(z) != 1.0) throw std::invalid_argument("decoupled_exact_pair requires h == 1");
    if (m.f.d2(z) != m.f.d2(0.0)) throw std::invalid_argument("decoupled_exact_pair requires quadratic f");
  }
  const auto n = static_cast<Eigen::Index>(disc.node_count());
  if (n > 12) throw std::invalid_argument("decoupled_exact_pair: mesh too large for enumeration");
  const ScalarField z_any = ScalarField::Ones(n);

  // Displacement: E is quadratic, so its Hessian columns are residuals of unit fields.
  const Eigen::Index nd = 2 * n;
  Eigen::MatrixXd A(nd, nd);
  for (Eigen::Index k = 0; k < nd; ++k) {
    A.col(k) = residual_u(VectorField::Unit(nd, k), z_any, disc, m);
  }
  std::vector<bool> fixed(static_cast<std::size_t>(nd), false);
  for (Index i : disc.mesh.dirichlet_nodes()) fixed[2 * i] = fixed[2 * i + 1] = true;
  std::vector<Eigen::Index> free_dofs;
  for (Eigen::Index k = 0; k < nd; ++k) {
    if (!fixed[static_cast<std::size_t>(k)]) free_dofs.push_back(k);
  }
  const VectorField g_t = config.load.at(disc.mesh, t);
  VectorField u = VectorField::Zero(nd);
  for (Eigen::Index k = 0; k < nd; ++k) {
    if (fixed[static_cast<std::size_t>(k)]) u[k] = g_t[k];
  }
  const auto nf = static_cast<Eigen::Index>(free_dofs.size());
  if (nf > 0) {
    Eigen::MatrixXd Aff(nf, nf);
    Eigen::VectorXd rhs(nf);
    const VectorField Au_d = A * u;
    for (Eigen::Index a = 0; a < nf; ++a) {
      rhs[a] = -Au_d[free_dofs[a]];
      for (Eigen::Index b = 0; b < nf; ++b) Aff(a, b) = A(free_dofs[a], free_dofs[b]);
    }
    const Eigen::VectorXd uf = Aff.ldlt().solve(rhs);
    for (Eigen::Index a = 0; a < nf; ++a) u[free_dofs[a]] = uf[a];
  }

  // Phase field: quadratic objective, enumerate active sets.
  const double rho = config.delta / tau;
  const auto G = [&](const ScalarField& z) -> Eigen::VectorXd {
    return grad_z_F(u, z, disc, m) + rho * disc.lumped().cwiseProduct(z - z_prev);
  };
  const Eigen::VectorXd lin = G(ScalarField::Zero(n));
  Eigen::MatrixXd H(n, n);
  for (Eigen::Index k = 0; k < n; ++k) H.col(k) = G(ScalarField::Unit(n, k)) - lin;
  H = 0.5 * (H + H.transpose());

  const double tiny = 1e-13;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<Eigen::Index> fr;
    ScalarField z = z_prev;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) fr.push_back(i);
    }
    const auto nfz = static_cast<Eigen::Index>(fr.size());
    if (nfz > 0) {
      Eigen::MatrixXd Hff(nfz, nfz);
      Eigen::VectorXd rhs(nfz);
      for (Eigen::Index a = 0; a < nfz; ++a) {
        double r = -lin[fr[a]];
        for (Eigen::Index i = 0; i < n; ++i) {
          if (mask & (1u << i)) r -= H(fr[a], i) * z_prev[i];
        }
        rhs[a] = r;
        for (Eigen::Index b = 0; b < nfz; ++b) Hff(a, b) = H(fr[a], fr[b]);
      }
      const Eigen::VectorXd zf = Hff.ldlt().solve(rhs);
      for (Eigen::Index a = 0; a < nfz; ++a) z[fr[a]] = zf[a];
    }
    bool ok = true;
    const Eigen::VectorXd grad = H * z + lin;
    for (Eigen::Index i = 0; i < n && ok; ++i) {
      if (mask & (1u << i)) {
        ok = grad[i] <= tiny * (1.0 + std::abs(lin[i]));
      } else {
        ok = z[i] <= z_prev[i] + tiny;
      }
    }
    if (ok) return State{u, z.cwiseMin(z_prev)};
  }
  throw std::runtime_error("decoupled_exact_pair: no active set satisfies the KKT system");
}

void write_verdicts(std::ostream& out, const std::vector<OracleVerdict>& verdicts) {
  out << "name,value,oracle,err,pass\n" << std::setprecision(17);
  for (const auto& v : verdicts) {
    out << v.name << ',' << v.value << ',' << v.oracle << ',' << v.rel_err << ','
        << (v.pass ? 1 : 0) << '\n';
  }
}

}  // namespace pff::oracle
