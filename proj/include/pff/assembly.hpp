#pragma once

#include <Eigen/Sparse>

#include "pff/mesh.hpp"

namespace pff {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Scalar P1 matrices. The stiffness carries no boundary conditions.
struct ScalarMatrices {
  /// Row-sum lumped mass, one entry per node (area of the nodal patch / 3).
  Eigen::VectorXd lumped_mass;
  SparseMatrix consistent_mass;
  SparseMatrix stiffness;
};

ScalarMatrices assemble_scalar_matrices(const TriMesh& mesh);

/// A mesh together with its scalar matrices, shared by every energy and
/// solver routine.
struct Discretization {
  TriMesh mesh;
  ScalarMatrices matrices;

  explicit Discretization(TriMesh m);

  std::size_t node_count() const { return mesh.node_count(); }
  const Eigen::VectorXd& lumped() const { return matrices.lumped_mass; }
  const SparseMatrix& stiffness() const { return matrices.stiffness; }
};

double l2_norm_sq(const Eigen::VectorXd& v, const Discretization& disc);
double l2_norm(const Eigen::VectorXd& v, const Discretization& disc);
/// v^T (M_lumped + K) v.
double h1_norm_sq(const Eigen::VectorXd& v, const Discretization& disc);
double h1_norm(const Eigen::VectorXd& v, const Discretization& disc);

/// Same norms applied componentwise to an interleaved vector field.
double vector_l2_norm_sq(const VectorField& v, const Discretization& disc);
double vector_h1_norm_sq(const VectorField& v, const Discretization& disc);
double vector_h1_norm(const VectorField& v, const Discretization& disc);

ScalarField component(const VectorField& v, int c);

}  // namespace pff
