#pragma once

#include <functional>
#include <string>

namespace pff {

/// A scalar function of the phase field together with its first and
/// (generalized) second derivative.
struct ScalarCurve {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;

  double operator()(double z) const { return value(z); }
};

/// h(z) = z^2 + eta.
ScalarCurve quadratic_degradation(double eta);
/// h(z) = z^4 + eta.
ScalarCurve quartic_degradation(double eta);
/// h(z) = c. Decouples the displacement from the phase field.
ScalarCurve constant_degradation(double c);

/// f(z) = (z - 1)^2.
ScalarCurve quadratic_dissipation();
/// f(z) = (z - 1)^2 + (z - 1)^4.
ScalarCurve quartic_dissipation();

ScalarCurve degradation_by_name(const std::string& name, double eta);
ScalarCurve dissipation_by_name(const std::string& name);

struct MaterialModel {
  double mu = 1.0;
  double kappa = 1.0;
  ScalarCurve h;
  ScalarCurve f;
  /// Strong-convexity modulus of f.
  double f_modulus = 2.0;

  /// mu = kappa = given values, h(z) = z^2 + eta, f(z) = (z - 1)^2.
  static MaterialModel standard(double mu, double kappa, double eta = 1e-2);

  /// Checks mu, kappa > 0 and samples h, f on [-1, 2] for convexity,
  /// h >= h(0) > 0 and 0 <= f(1) <= f. Throws std::invalid_argument.
  void validate() const;
};

}  // namespace pff
