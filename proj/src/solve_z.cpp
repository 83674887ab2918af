#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>

#include "pff/solvers.hpp"
#include "pff/tensor.hpp"

namespace pff {

namespace {

// Phase-field objective with u frozen:
//   1/2 z^T K z + 1/2 sum h(z_i) Q_i + 1/2 sum w_i f(z_i) + rho/2 sum w_i (z_i - p_i)^2 + c0
// where c0 is the z-independent compressive part of the elastic energy.
class PhaseProblem {
 public:
  PhaseProblem(const VectorField& u, const ScalarField& z_prev, double rho,
               const Discretization& disc, const MaterialModel& m)
      : disc_(disc), m_(m), prev_(z_prev), rho_(rho), load_(tensile_load(u, disc, m)) {
    const auto& mesh = disc.mesh;
    double c = 0.0;
    for (Index e = 0; e < mesh.triangle_count(); ++e) {
      c += mesh.area(e) * compressive_density(element_strain(u, e, mesh), m);
    }
    compressive_ = 0.5 * c;
  }

  double value(const ScalarField& z) const {
    const auto& w = disc_.lumped();
    double sum = 0.5 * z.dot(disc_.stiffness() * z) + compressive_;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double d = z[i] - prev_[i];
      sum += 0.5 * m_.h(z[i]) * load_[i] + 0.5 * w[i] * m_.f(z[i]) + 0.5 * rho_ * w[i] * d * d;
    }
    return sum;
  }

  ScalarField gradient(const ScalarField& z) const {
    const auto& w = disc_.lumped();
    ScalarField g = disc_.stiffness() * z;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      g[i] += 0.5 * m_.h.d1(z[i]) * load_[i] + 0.5 * w[i] * m_.f.d1(z[i]) +
              rho_ * w[i] * (z[i] - prev_[i]);
    }
    return g;
  }

  Eigen::VectorXd hessian_diagonal(const ScalarField& z) const {
    const auto& w = disc_.lumped();
    Eigen::VectorXd d(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      d[i] = 0.5 * m_.h.d2(z[i]) * load_[i] + 0.5 * w[i] * m_.f.d2(z[i]) + rho_ * w[i];
    }
    return d;
  }

  const ScalarField& prev() const { return prev_; }
  const Discretization& disc() const { return disc_; }

 private:
  const Discretization& disc_;
  const MaterialModel& m_;
  const ScalarField& prev_;
  double rho_;
  ScalarField load_;
  double compressive_ = 0.0;
};

double kkt_residual(const ScalarField& g, const ScalarField& z, const ScalarField& prev) {
  double res = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double gap = prev[i] - z[i];
    res = std::max({res, std::max(g[i], 0.0), std::max(-g[i], 0.0) * gap});
  }
  return res;
}

ScalarField project(const ScalarField& z, const ScalarField& prev) { return z.cwiseMin(prev); }

}  // namespace

double z_step_objective(const VectorField& u, const ScalarField& z, const ScalarField& z_prev,
                        double rho, const Discretization& disc, const MaterialModel& m) {
  return PhaseProblem(u, z_prev, rho, disc, m).value(z);
}

double z_step_kkt_residual(const VectorField& u, const ScalarField& z, const ScalarField& z_prev,
                           double rho, const Discretization& disc, const MaterialModel& m) {
  const PhaseProblem problem(u, z_prev, rho, disc, m);
  return kkt_residual(problem.gradient(z), z, z_prev);
}

ZSolveResult solve_z(const VectorField& u, const ScalarField& z_prev, double delta, double tau,
                     const ScalarField& z_init, const Discretization& disc, const MaterialModel& m,
                     double tol, int max_iter) {
  const auto n = static_cast<Eigen::Index>(disc.node_count());
  if (z_prev.size() != n || z_init.size() != n || u.size() != 2 * n) {
    throw std::invalid_argument("solve_z: field sizes do not match the mesh");
  }
  if (delta < 0.0 || !(tau > 0.0)) throw std::invalid_argument("solve_z: need delta >= 0, tau > 0");

  const PhaseProblem problem(u, z_prev, delta / tau, disc, m);
  ZSolveResult out;
  ScalarField z = project(z_init, z_prev);
  double value = problem.value(z);
  ScalarField g = problem.gradient(z);
  double res = kkt_residual(g, z, z_prev);

  // With a very large rho the gradient is only resolved to about
  // eps * rho * w * |z|, so the target is raised to that floor.
  const double floor = 16.0 * std::numeric_limits<double>::epsilon() * (delta / tau) *
                       disc.lumped().maxCoeff() * std::max(1.0, z_prev.cwiseAbs().maxCoeff());
  tol = std::max(tol, floor);

  Eigen::SimplicialLLT<SparseMatrix> chol;
  const SparseMatrix& K = disc.stiffness();

  // Once the residual is below tol (but above roundoff), one more Newton
  // step is taken; it is kept only if it lowers the residual.
  bool polishing = false;
  for (int it = 0;; ++it) {
    out.stats.iterations = it;
    out.stats.final_residual = res;
    if (res <= tol) {
      out.stats.converged = true;
      if (polishing || res <= 1e-3 * tol || it >= max_iter) break;
      polishing = true;
    }
    if (it >= max_iter) {
      throw NonConvergenceError(
          "solve_z: Newton iteration cap reached (KKT residual " + std::to_string(res) + ")", z, res);
    }

    // Epsilon-active set: nodes at (or within eps of) the bound whose
    // gradient pushes them further up.
    const ScalarField pg = z - project(z - g, z_prev);
    const double eps = std::min(1e-3, pg.lpNorm<Eigen::Infinity>());
    std::vector<Eigen::Index> free_index(static_cast<std::size_t>(n), -1);
    Eigen::Index n_free = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool binding = z_prev[i] - z[i] <= eps && g[i] < 0.0;
      if (!binding) free_index[static_cast<std::size_t>(i)] = n_free++;
    }

    const Eigen::VectorXd hdiag = problem.hessian_diagonal(z);
    ScalarField dir = ScalarField::Zero(n);
    if (n_free > 0) {
      std::vector<Eigen::Triplet<double>> trips;
      trips.reserve(static_cast<std::size_t>(K.nonZeros() + n_free));
      for (int col = 0; col < K.outerSize(); ++col) {
        const auto fc = free_index[static_cast<std::size_t>(col)];
        if (fc < 0) continue;
        for (SparseMatrix::InnerIterator itk(K, col); itk; ++itk) {
          const auto fr = free_index[static_cast<std::size_t>(itk.row())];
          if (fr >= 0) trips.emplace_back(fr, fc, itk.value());
        }
        trips.emplace_back(fc, fc, hdiag[col]);
      }
      SparseMatrix h(n_free, n_free);
      h.setFromTriplets(trips.begin(), trips.end());
      chol.compute(h);
      if (chol.info() != Eigen::Success) {
        throw NonConvergenceError("solve_z: reduced Hessian factorization failed", z, res);
      }
      Eigen::VectorXd rhs(n_free);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (const auto f = free_index[static_cast<std::size_t>(i)]; f >= 0) rhs[f] = -g[i];
      }
      const Eigen::VectorXd d_free = chol.solve(rhs);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (const auto f = free_index[static_cast<std::size_t>(i)]; f >= 0) dir[i] = d_free[f];
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (free_index[static_cast<std::size_t>(i)] < 0) dir[i] = -g[i] / hdiag[i];
    }

    // Projected Armijo search.
    const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(value));
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 50; ++ls, alpha *= 0.5) {
      const ScalarField trial = project(z + alpha * dir, z_prev);
      double predicted = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (free_index[static_cast<std::size_t>(i)] >= 0) {
          predicted += alpha * g[i] * dir[i];
        } else {
          predicted += g[i] * (trial[i] - z[i]);
        }
      }
      const double v_trial = problem.value(trial);
      const bool armijo = v_trial <= value + 1e-4 * predicted;
      bool flat_ok = false;
      ScalarField g_trial;
      if (!armijo && std::abs(v_trial - value) <= roundoff) {
        g_trial = problem.gradient(trial);
        flat_ok = kkt_residual(g_trial, trial, z_prev) < res;
      }
      if (polishing && (armijo || flat_ok)) {
        const ScalarField g_new = flat_ok ? g_trial : problem.gradient(trial);
        const double res_new = kkt_residual(g_new, trial, z_prev);
        if (res_new < res) {
          z = trial;
          value = v_trial;
          g = g_new;
          res = res_new;
          accepted = true;
        }
        break;
      }
      if (armijo || flat_ok) {
        z = trial;
        value = v_trial;
        g = flat_ok ? g_trial : problem.gradient(z);
        res = kkt_residual(g, z, z_prev);
        accepted = true;
        break;
      }
    }
    if (!accepted && polishing) break;
    if (!accepted) {
      throw NonConvergenceError(
          "solve_z: line search failed (KKT residual " + std::to_string(res) + ")", z, res);
    }
  }

  out.multipliers = ScalarField::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (z[i] == z_prev[i]) {
      out.multipliers[i] = std::max(-g[i], 0.0);
      ++out.stats.active_set_size;
    }
  }
  out.min_value = n > 0 ? z.minCoeff() : 0.0;
  out.z = std::move(z);
  return out;
}

ZSolveResult solve_z_unpenalized(const VectorField& u, const ScalarField& z_prev,
                                 const Discretization& disc, const MaterialModel& m, double tol,
                                 int max_iter) {
  return solve_z(u, z_prev, 0.0, 1.0, z_prev, disc, m, tol, max_iter);
}

}  // namespace pff
