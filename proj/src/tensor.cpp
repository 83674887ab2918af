#include "pff/tensor.hpp"

#include <algorithm>

namespace pff {

VolDevParts vol_dev_split(const SymTensor2& e) {
  const SymTensor2 vol = (0.5 * e.trace()) * SymTensor2::identity();
  return {vol, e - vol};
}

TensileCompressiveParts tensile_compressive(const SymTensor2& e) {
  const double tr = e.trace();
  const double pos = std::max(tr, 0.0);
  const double neg = std::max(-tr, 0.0);
  return {(0.5 * pos) * SymTensor2::identity(), (0.5 * neg) * SymTensor2::identity()};
}

double degradable_density(const SymTensor2& e, const MaterialModel& m) {
  const auto [vol, dev] = vol_dev_split(e);
  const auto parts = tensile_compressive(e);
  return m.mu * dev.norm_sq() + m.kappa * parts.plus.norm_sq();
}

double compressive_density(const SymTensor2& e, const MaterialModel& m) {
  return m.kappa * tensile_compressive(e).minus.norm_sq();
}

double energy_density_with_factor(double h_value, const SymTensor2& e, const MaterialModel& m) {
  return h_value * degradable_density(e, m) + compressive_density(e, m);
}

SymTensor2 stress_with_factor(double h_value, const SymTensor2& e, const MaterialModel& m) {
  const auto [vol, dev] = vol_dev_split(e);
  const auto parts = tensile_compressive(e);
  return 2.0 * h_value * (m.mu * dev + m.kappa * parts.plus) - 2.0 * m.kappa * parts.minus;
}

SymTensor2 tangent_apply(double h_value, const SymTensor2& e, const SymTensor2& de,
                         const MaterialModel& m) {
  const auto [dvol, ddev] = vol_dev_split(de);
  const double vol_coeff = e.trace() >= 0.0 ? h_value * m.kappa : m.kappa;
  return 2.0 * h_value * m.mu * ddev + 2.0 * vol_coeff * dvol;
}

double energy_density(double z, const SymTensor2& e, const MaterialModel& m) {
  return energy_density_with_factor(m.h(z), e, m);
}

SymTensor2 stress(double z, const SymTensor2& e, const MaterialModel& m) {
  return stress_with_factor(m.h(z), e, m);
}

double energy_density_dz(double z, const SymTensor2& e, const MaterialModel& m) {
  return m.h.d1(z) * degradable_density(e, m);
}

}  // namespace pff
