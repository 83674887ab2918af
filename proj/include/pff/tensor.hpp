#pragma once

#include "pff/material.hpp"

namespace pff {

/// Symmetric 2x2 tensor stored as (xx, yy, xy). The off-diagonal entry
/// appears twice in the full matrix, so every contraction weights it by 2.
struct SymTensor2 {
  double xx = 0.0;
  double yy = 0.0;
  double xy = 0.0;

  static constexpr SymTensor2 identity() { return {1.0, 1.0, 0.0}; }
  static constexpr SymTensor2 zero() { return {0.0, 0.0, 0.0}; }

  constexpr double trace() const { return xx + yy; }
  constexpr double norm_sq() const { return xx * xx + yy * yy + 2.0 * xy * xy; }

  constexpr SymTensor2& operator+=(const SymTensor2& o) {
    xx += o.xx;
    yy += o.yy;
    xy += o.xy;
    return *this;
  }
  constexpr SymTensor2& operator-=(const SymTensor2& o) {
    xx -= o.xx;
    yy -= o.yy;
    xy -= o.xy;
    return *this;
  }
  constexpr SymTensor2& operator*=(double s) {
    xx *= s;
    yy *= s;
    xy *= s;
    return *this;
  }
};

constexpr SymTensor2 operator+(SymTensor2 a, const SymTensor2& b) { return a += b; }
constexpr SymTensor2 operator-(SymTensor2 a, const SymTensor2& b) { return a -= b; }
constexpr SymTensor2 operator-(SymTensor2 a) { return a *= -1.0; }
constexpr SymTensor2 operator*(double s, SymTensor2 a) { return a *= s; }
constexpr SymTensor2 operator*(SymTensor2 a, double s) { return a *= s; }

/// Frobenius inner product A : B.
constexpr double contract(const SymTensor2& a, const SymTensor2& b) {
  return a.xx * b.xx + a.yy * b.yy + 2.0 * a.xy * b.xy;
}

struct VolDevParts {
  SymTensor2 vol;
  SymTensor2 dev;
};

struct TensileCompressiveParts {
  SymTensor2 plus;
  SymTensor2 minus;
};

VolDevParts vol_dev_split(const SymTensor2& e);

/// Volumetric part split by the sign of the trace. At tr E = 0 both parts vanish.
TensileCompressiveParts tensile_compressive(const SymTensor2& e);

/// W(z, E) = h(z)(mu|E_d|^2 + kappa|E_v+|^2) + kappa|E_v-|^2.
double energy_density(double z, const SymTensor2& e, const MaterialModel& m);

/// Strain derivative of energy_density.
SymTensor2 stress(double z, const SymTensor2& e, const MaterialModel& m);

/// Phase-field derivative h'(z)(mu|E_d|^2 + kappa|E_v+|^2).
double energy_density_dz(double z, const SymTensor2& e, const MaterialModel& m);

// The overloads below take the degradation value directly. Element kernels
// use them with a vertex-averaged h instead of h at a single point.

/// mu|E_d|^2 + kappa|E_v+|^2, the part of W multiplied by the degradation.
double degradable_density(const SymTensor2& e, const MaterialModel& m);

/// kappa|E_v-|^2, the part of W that the phase field never touches.
double compressive_density(const SymTensor2& e, const MaterialModel& m);

double energy_density_with_factor(double h_value, const SymTensor2& e, const MaterialModel& m);
SymTensor2 stress_with_factor(double h_value, const SymTensor2& e, const MaterialModel& m);

/// Generalized derivative of the stress in direction de, using the trace
/// sign of e to choose the active branch (tension when tr e >= 0).
SymTensor2 tangent_apply(double h_value, const SymTensor2& e, const SymTensor2& de,
                         const MaterialModel& m);

}  // namespace pff
