#include "pff/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pff/tensor.hpp"

namespace pff {

namespace {

void check_sizes(const VectorField& u, const ScalarField& z, const Discretization& disc) {
  const auto n = static_cast<Eigen::Index>(disc.node_count());
  if (u.size() != 2 * n || z.size() != n) {
    throw std::invalid_argument("field sizes do not match the mesh");
  }
}

double vertex_mean_h(const ScalarField& z, const std::array<Index, 3>& t, const MaterialModel& m) {
  return (m.h(z[t[0]]) + m.h(z[t[1]]) + m.h(z[t[2]])) / 3.0;
}

}  // namespace

double elastic_energy(const VectorField& u, const ScalarField& z, const Discretization& disc,
                      const MaterialModel& m) {
  check_sizes(u, z, disc);
  const auto& mesh = disc.mesh;
  double sum = 0.0;
  for (Index e = 0; e < mesh.triangle_count(); ++e) {
    const SymTensor2 eps = element_strain(u, e, mesh);
    const double hbar = vertex_mean_h(z, mesh.triangle(e), m);
    sum += mesh.area(e) * energy_density_with_factor(hbar, eps, m);
  }
  return 0.5 * sum;
}

EnergyReport total_energy(const VectorField& u, const ScalarField& z, const Discretization& disc,
                          const MaterialModel& m) {
  EnergyReport r;
  r.elastic = elastic_energy(u, z, disc, m);
  double fsum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) fsum += disc.lumped()[i] * m.f(z[i]);
  r.dissipation = 0.5 * z.dot(disc.stiffness() * z) + 0.5 * fsum;
  r.total = r.elastic + r.dissipation;
  return r;
}

ScalarField tensile_load(const VectorField& u, const Discretization& disc, const MaterialModel& m) {
  const auto& mesh = disc.mesh;
  ScalarField q = ScalarField::Zero(static_cast<Eigen::Index>(mesh.node_count()));
  for (Index e = 0; e < mesh.triangle_count(); ++e) {
    const double share = mesh.area(e) / 3.0 * degradable_density(element_strain(u, e, mesh), m);
    for (Index v : mesh.triangle(e)) q[static_cast<Eigen::Index>(v)] += share;
  }
  return q;
}

ScalarField grad_z_F(const VectorField& u, const ScalarField& z, const Discretization& disc,
                     const MaterialModel& m) {
  check_sizes(u, z, disc);
  const ScalarField q = tensile_load(u, disc, m);
  ScalarField g = disc.stiffness() * z;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    g[i] += 0.5 * m.h.d1(z[i]) * q[i] + 0.5 * disc.lumped()[i] * m.f.d1(z[i]);
  }
  return g;
}

ScalarField resolved_grad_z_F(const VectorField& u, const ScalarField& z, const Discretization& disc,
                              const MaterialModel& m) {
  check_sizes(u, z, disc);
  const ScalarField q = tensile_load(u, disc, m);
  const SparseMatrix& K = disc.stiffness();
  ScalarField g = K * z;
  ScalarField scale = ScalarField::Zero(z.size());
  for (int col = 0; col < K.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(K, col); it; ++it) scale[it.row()] += std::abs(it.value() * z[col]);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double a = 0.5 * m.h.d1(z[i]) * q[i];
    const double b = 0.5 * disc.lumped()[i] * m.f.d1(z[i]);
    g[i] += a + b;
    if (std::abs(g[i]) <= 16.0 * eps * (scale[i] + std::abs(a) + std::abs(b))) g[i] = 0.0;
  }
  return g;
}

VectorField residual_u(const VectorField& u, const ScalarField& z, const Discretization& disc,
                       const MaterialModel& m) {
  check_sizes(u, z, disc);
  const auto& mesh = disc.mesh;
  VectorField r = VectorField::Zero(u.size());
  for (Index e = 0; e < mesh.triangle_count(); ++e) {
    const auto& t = mesh.triangle(e);
    const auto& grads = mesh.gradients(e);
    const double hbar = vertex_mean_h(z, t, m);
    const SymTensor2 sig = stress_with_factor(hbar, element_strain(u, e, mesh), m);
    const double w = 0.5 * mesh.area(e);
    for (int a = 0; a < 3; ++a) {
      r[2 * t[a]] += w * (sig.xx * grads[a].x() + sig.xy * grads[a].y());
      r[2 * t[a] + 1] += w * (sig.xy * grads[a].x() + sig.yy * grads[a].y());
    }
  }
  return r;
}

double power_P(const VectorField& u, const ScalarField& z, const VectorField& w,
               const Discretization& disc, const MaterialModel& m) {
  if (w.size() != u.size()) throw std::invalid_argument("power_P: test field size mismatch");
  return residual_u(u, z, disc, m).dot(w);
}

SlopeResult slope_from_gradient(const ScalarField& g, const Eigen::VectorXd& lumped) {
  if (g.size() != lumped.size()) throw std::invalid_argument("slope: size mismatch");
  SlopeResult out;
  out.direction = ScalarField::Zero(g.size());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double gp = std::max(g[i], 0.0);
    sum += gp * gp / lumped[i];
  }
  out.value = std::sqrt(sum);
  if (out.value > 0.0) {
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      out.direction[i] = -std::max(g[i], 0.0) / (lumped[i] * out.value);
    }
  }
  return out;
}

SlopeResult unilateral_slope(const VectorField& u, const ScalarField& z, const Discretization& disc,
                             const MaterialModel& m) {
  return slope_from_gradient(resolved_grad_z_F(u, z, disc, m), disc.lumped());
}

}  // namespace pff
