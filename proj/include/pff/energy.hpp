#pragma once

#include "pff/assembly.hpp"
#include "pff/material.hpp"

namespace pff {

struct EnergyReport {
  double elastic = 0.0;
  double dissipation = 0.0;
  double total = 0.0;
};

/// Discrete F = E + D with
///   E = 1/2 sum_e area_e [ hbar_e (mu|eps_d|^2 + kappa|eps_v+|^2) + kappa|eps_v-|^2 ],
///   D = 1/2 z^T K z + 1/2 sum_i w_i f(z_i),
/// where hbar_e is the vertex average of h(z) and w_i the lumped weight.
EnergyReport total_energy(const VectorField& u, const ScalarField& z, const Discretization& disc,
                          const MaterialModel& m);

double elastic_energy(const VectorField& u, const ScalarField& z, const Discretization& disc,
                      const MaterialModel& m);

/// Vertex-accumulated tensile load Q_i = sum_{e ∋ i} area_e/3 (mu|eps_d|^2 + kappa|eps_v+|^2).
ScalarField tensile_load(const VectorField& u, const Discretization& disc, const MaterialModel& m);

/// Exact gradient of total_energy in z:
///   g_i = 1/2 h'(z_i) Q_i + (K z)_i + 1/2 w_i f'(z_i).
ScalarField grad_z_F(const VectorField& u, const ScalarField& z, const Discretization& disc,
                     const MaterialModel& m);

/// Exact gradient of the elastic energy in u (2 dof per node).
VectorField residual_u(const VectorField& u, const ScalarField& z, const Discretization& disc,
                       const MaterialModel& m);

/// P(u, z, w) = d/du F(u, z)[w].
double power_P(const VectorField& u, const ScalarField& z, const VectorField& w,
               const Discretization& disc, const MaterialModel& m);

struct SlopeResult {
  double value = 0.0;
  /// Maximizing nonpositive direction with unit lumped L2 norm; zero when value == 0.
  ScalarField direction;
};

/// Closed form sqrt(sum_i (g_i)_+^2 / m_i) of the unilateral slope for a
/// given z-gradient g and lumped weights m.
SlopeResult slope_from_gradient(const ScalarField& g, const Eigen::VectorXd& lumped);

/// grad_z_F with entries at roundoff level (16 eps times the sum of the
/// magnitudes of their terms) set to zero.
ScalarField resolved_grad_z_F(const VectorField& u, const ScalarField& z, const Discretization& disc,
                              const MaterialModel& m);

/// Slope of the resolved gradient.
SlopeResult unilateral_slope(const VectorField& u, const ScalarField& z, const Discretization& disc,
                             const MaterialModel& m);

}  // namespace pff
