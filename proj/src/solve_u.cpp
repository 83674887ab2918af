#include <Eigen/SparseCholesky>

#include <cmath>
#include <limits>

#include "pff/solvers.hpp"
#include "pff/tensor.hpp"

namespace pff {

std::vector<bool> dirichlet_dof_mask(const TriMesh& mesh) {
  std::vector<bool> mask(2 * mesh.node_count(), false);
  for (Index i : mesh.dirichlet_nodes()) {
    mask[2 * i] = true;
    mask[2 * i + 1] = true;
  }
  return mask;
}

double free_dof_residual(const VectorField& u, const ScalarField& z, const Discretization& disc,
                         const MaterialModel& m) {
  const VectorField r = residual_u(u, z, disc, m);
  const auto mask = dirichlet_dof_mask(disc.mesh);
  double res = 0.0;
  for (Eigen::Index k = 0; k < r.size(); ++k) {
    if (!mask[static_cast<std::size_t>(k)]) res = std::max(res, std::abs(r[k]));
  }
  return res;
}

namespace {

// Elastic energy pieces with the element degradation factors frozen.
class FrozenElasticity {
 public:
  FrozenElasticity(const ScalarField& z, const Discretization& disc, const MaterialModel& m)
      : disc_(disc), m_(m), hbar_(disc.mesh.triangle_count()) {
    for (Index e = 0; e < disc.mesh.triangle_count(); ++e) {
      const auto& t = disc.mesh.triangle(e);
      hbar_[e] = (m.h(z[t[0]]) + m.h(z[t[1]]) + m.h(z[t[2]])) / 3.0;
    }
  }

  double energy(const VectorField& u) const {
    const auto& mesh = disc_.mesh;
    double sum = 0.0;
    for (Index e = 0; e < mesh.triangle_count(); ++e) {
      sum += mesh.area(e) * energy_density_with_factor(hbar_[e], element_strain(u, e, mesh), m_);
    }
    return 0.5 * sum;
  }

  VectorField gradient(const VectorField& u) const {
    const auto& mesh = disc_.mesh;
    VectorField r = VectorField::Zero(u.size());
    for (Index e = 0; e < mesh.triangle_count(); ++e) {
      const auto& t = mesh.triangle(e);
      const auto& g = mesh.gradients(e);
      const SymTensor2 sig = stress_with_factor(hbar_[e], element_strain(u, e, mesh), m_);
      const double w = 0.5 * mesh.area(e);
      for (int a = 0; a < 3; ++a) {
        r[2 * t[a]] += w * (sig.xx * g[a].x() + sig.xy * g[a].y());
        r[2 * t[a] + 1] += w * (sig.xy * g[a].x() + sig.yy * g[a].y());
      }
    }
    return r;
  }

  /// Generalized Hessian restricted to free dofs (free_index[k] < 0 for fixed dofs).
  SparseMatrix tangent(const VectorField& u, const std::vector<Eigen::Index>& free_index,
                       Eigen::Index n_free) const {
    const auto& mesh = disc_.mesh;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(36 * mesh.triangle_count());
    for (Index e = 0; e < mesh.triangle_count(); ++e) {
      const auto& t = mesh.triangle(e);
      const auto& g = mesh.gradients(e);
      const SymTensor2 eps = element_strain(u, e, mesh);
      std::array<SymTensor2, 6> unit;
      std::array<Eigen::Index, 6> dof;
      for (int a = 0; a < 3; ++a) {
        unit[2 * a] = {g[a].x(), 0.0, 0.5 * g[a].y()};
        unit[2 * a + 1] = {0.0, g[a].y(), 0.5 * g[a].x()};
        dof[2 * a] = free_index[2 * t[a]];
        dof[2 * a + 1] = free_index[2 * t[a] + 1];
      }
      const double w = 0.5 * mesh.area(e);
      for (int p = 0; p < 6; ++p) {
        if (dof[p] < 0) continue;
        const SymTensor2 sig = tangent_apply(hbar_[e], eps, unit[p], m_);
        for (int q = 0; q < 6; ++q) {
          if (dof[q] < 0) continue;
          trips.emplace_back(dof[q], dof[p], w * contract(sig, unit[q]));
        }
      }
    }
    SparseMatrix h(n_free, n_free);
    h.setFromTriplets(trips.begin(), trips.end());
    return h;
  }

 private:
  const Discretization& disc_;
  const MaterialModel& m_;
  std::vector<double> hbar_;
};

double free_inf_norm(const VectorField& r, const std::vector<Eigen::Index>& free_index) {
  double res = 0.0;
  for (Eigen::Index k = 0; k < r.size(); ++k) {
    if (free_index[static_cast<std::size_t>(k)] >= 0) res = std::max(res, std::abs(r[k]));
  }
  return res;
}

}  // namespace

USolveResult solve_u(const ScalarField& z, const VectorField& g_t, const VectorField& u_init,
                     const Discretization& disc, const MaterialModel& m, double tol, int max_iter) {
  const auto& mesh = disc.mesh;
  if (!mesh.has_dirichlet()) {
    throw CoercivityError("displacement solve requires at least one Dirichlet edge");
  }
  const auto n_dof = static_cast<Eigen::Index>(2 * mesh.node_count());
  if (g_t.size() != n_dof || u_init.size() != n_dof || z.size() != n_dof / 2) {
    throw std::invalid_argument("solve_u: field sizes do not match the mesh");
  }

  const auto mask = dirichlet_dof_mask(mesh);
  std::vector<Eigen::Index> free_index(static_cast<std::size_t>(n_dof), -1);
  Eigen::Index n_free = 0;
  for (Eigen::Index k = 0; k < n_dof; ++k) {
    if (!mask[static_cast<std::size_t>(k)]) free_index[static_cast<std::size_t>(k)] = n_free++;
  }

  VectorField u = u_init;
  for (Eigen::Index k = 0; k < n_dof; ++k) {
    if (mask[static_cast<std::size_t>(k)]) u[k] = g_t[k];
  }

  const FrozenElasticity model(z, disc, m);
  USolveResult out;
  double energy = model.energy(u);
  VectorField grad = model.gradient(u);
  double res = free_inf_norm(grad, free_index);

  Eigen::SimplicialLLT<SparseMatrix> chol;
  bool pattern_ready = false;

  for (int it = 0;; ++it) {
    out.stats.iterations = it;
    out.stats.final_residual = res;
    if (res <= tol) {
      out.stats.converged = true;
      break;
    }
    if (it >= max_iter) {
      throw NonConvergenceError("solve_u: Newton iteration cap reached (residual " +
                                    std::to_string(res) + ")",
                                u, res);
    }

    const SparseMatrix h = model.tangent(u, free_index, n_free);
    if (!pattern_ready) {
      chol.analyzePattern(h);
      pattern_ready = true;
    }
    chol.factorize(h);
    if (chol.info() != Eigen::Success) {
      throw NonConvergenceError("solve_u: tangent factorization failed", u, res);
    }
    Eigen::VectorXd rhs(n_free);
    for (Eigen::Index k = 0; k < n_dof; ++k) {
      if (const auto f = free_index[static_cast<std::size_t>(k)]; f >= 0) rhs[f] = -grad[k];
    }
    const Eigen::VectorXd step_free = chol.solve(rhs);
    VectorField step = VectorField::Zero(n_dof);
    for (Eigen::Index k = 0; k < n_dof; ++k) {
      if (const auto f = free_index[static_cast<std::size_t>(k)]; f >= 0) step[k] = step_free[f];
    }

    // Armijo backtracking on the energy. Near convergence the energy
    // difference drowns in round-off; then a step that still lowers the
    // residual is accepted.
    const double slope0 = grad.dot(step);
    const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(energy));
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls, alpha *= 0.5) {
      const VectorField trial = u + alpha * step;
      const double e_trial = model.energy(trial);
      const bool armijo = e_trial <= energy + 1e-4 * alpha * slope0;
      bool flat_ok = false;
      VectorField g_trial;
      if (!armijo && std::abs(e_trial - energy) <= roundoff) {
        g_trial = model.gradient(trial);
        flat_ok = free_inf_norm(g_trial, free_index) < res;
      }
      if (armijo || flat_ok) {
        u = trial;
        energy = e_trial;
        grad = flat_ok ? g_trial : model.gradient(u);
        res = free_inf_norm(grad, free_index);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw NonConvergenceError("solve_u: line search failed (residual " + std::to_string(res) + ")",
                                u, res);
    }
  }
  out.u = std::move(u);
  return out;
}

}  // namespace pff
