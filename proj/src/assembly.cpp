#include "pff/assembly.hpp"

#include <cmath>
#include <vector>

namespace pff {

ScalarMatrices assemble_scalar_matrices(const TriMesh& mesh) {
  const auto n = static_cast<Eigen::Index>(mesh.node_count());
  std::vector<Eigen::Triplet<double>> mass, stiff;
  mass.reserve(9 * mesh.triangle_count());
  stiff.reserve(9 * mesh.triangle_count());
  Eigen::VectorXd lumped = Eigen::VectorXd::Zero(n);

  for (Index e = 0; e < mesh.triangle_count(); ++e) {
    const auto& t = mesh.triangle(e);
    const auto& g = mesh.gradients(e);
    const double area = mesh.area(e);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const auto ia = static_cast<Eigen::Index>(t[a]);
        const auto ib = static_cast<Eigen::Index>(t[b]);
        mass.emplace_back(ia, ib, area / 12.0 * (a == b ? 2.0 : 1.0));
        stiff.emplace_back(ia, ib, area * g[a].dot(g[b]));
      }
      lumped[static_cast<Eigen::Index>(t[a])] += area / 3.0;
    }
  }

  ScalarMatrices out;
  out.lumped_mass = std::move(lumped);
  out.consistent_mass.resize(n, n);
  out.consistent_mass.setFromTriplets(mass.begin(), mass.end());
  out.stiffness.resize(n, n);
  out.stiffness.setFromTriplets(stiff.begin(), stiff.end());
  return out;
}

Discretization::Discretization(TriMesh m)
    : mesh(std::move(m)), matrices(assemble_scalar_matrices(mesh)) {}

double l2_norm_sq(const Eigen::VectorXd& v, const Discretization& disc) {
  return v.dot(disc.lumped().cwiseProduct(v));
}

double l2_norm(const Eigen::VectorXd& v, const Discretization& disc) {
  return std::sqrt(l2_norm_sq(v, disc));
}

double h1_norm_sq(const Eigen::VectorXd& v, const Discretization& disc) {
  return l2_norm_sq(v, disc) + v.dot(disc.stiffness() * v);
}

double h1_norm(const Eigen::VectorXd& v, const Discretization& disc) {
  return std::sqrt(std::max(h1_norm_sq(v, disc), 0.0));
}

ScalarField component(const VectorField& v, int c) {
  const Eigen::Index n = v.size() / 2;
  ScalarField out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = v[2 * i + c];
  return out;
}

double vector_l2_norm_sq(const VectorField& v, const Discretization& disc) {
  return l2_norm_sq(component(v, 0), disc) + l2_norm_sq(component(v, 1), disc);
}

double vector_h1_norm_sq(const VectorField& v, const Discretization& disc) {
  return h1_norm_sq(component(v, 0), disc) + h1_norm_sq(component(v, 1), disc);
}

double vector_h1_norm(const VectorField& v, const Discretization& disc) {
  return std::sqrt(std::max(vector_h1_norm_sq(v, disc), 0.0));
}

}  // namespace pff
