#include "pff/material.hpp"

#include <cmath>
#include <stdexcept>

namespace pff {

ScalarCurve quadratic_degradation(double eta) {
  return {"quadratic", [eta](double z) { return z * z + eta; }, [](double z) { return 2.0 * z; },
          [](double) { return 2.0; }};
}

ScalarCurve quartic_degradation(double eta) {
  return {"quartic", [eta](double z) { return z * z * z * z + eta; },
          [](double z) { return 4.0 * z * z * z; }, [](double z) { return 12.0 * z * z; }};
}

ScalarCurve constant_degradation(double c) {
  return {"constant", [c](double) { return c; }, [](double) { return 0.0; },
          [](double) { return 0.0; }};
}

ScalarCurve quadratic_dissipation() {
  return {"quadratic", [](double z) { return (z - 1.0) * (z - 1.0); },
          [](double z) { return 2.0 * (z - 1.0); }, [](double) { return 2.0; }};
}

ScalarCurve quartic_dissipation() {
  return {"quartic",
          [](double z) {
            const double d = z - 1.0;
            return d * d + d * d * d * d;
          },
          [](double z) {
            const double d = z - 1.0;
            return 2.0 * d + 4.0 * d * d * d;
          },
          [](double z) {
            const double d = z - 1.0;
            return 2.0 + 12.0 * d * d;
          }};
}

ScalarCurve degradation_by_name(const std::string& name, double eta) {
  if (name == "quadratic") return quadratic_degradation(eta);
  if (name == "quartic") return quartic_degradation(eta);
  if (name == "constant") return constant_degradation(1.0);
  throw std::invalid_argument("unknown degradation function '" + name + "'");
}

ScalarCurve dissipation_by_name(const std::string& name) {
  if (name == "quadratic") return quadratic_dissipation();
  if (name == "quartic") return quartic_dissipation();
  throw std::invalid_argument("unknown dissipation function '" + name + "'");
}

MaterialModel MaterialModel::standard(double mu, double kappa, double eta) {
  MaterialModel m;
  m.mu = mu;
  m.kappa = kappa;
  m.h = quadratic_degradation(eta);
  m.f = quadratic_dissipation();
  m.f_modulus = 2.0;
  return m;
}

void MaterialModel::validate() const {
  if (!(mu > 0.0) || !(kappa > 0.0)) {
    throw std::invalid_argument("material requires mu > 0 and kappa > 0");
  }
  if (!h.value || !h.d1 || !h.d2 || !f.value || !f.d1 || !f.d2) {
    throw std::invalid_argument("material curves are not fully defined");
  }
  if (!(f_modulus > 0.0)) throw std::invalid_argument("f must be strongly convex");

  constexpr int kSamples = 301;
  const double h0 = h(0.0);
  const double f1 = f(1.0);
  if (!(h0 > 0.0)) throw std::invalid_argument("degradation requires h(0) > 0");
  if (f1 < 0.0) throw std::invalid_argument("dissipation requires f(1) >= 0");
  const double slack = 1e-12;
  for (int i = 0; i < kSamples; ++i) {
    const double z = -1.0 + 3.0 * i / (kSamples - 1);
    if (h(z) < h0 - slack) throw std::invalid_argument("degradation requires h(z) >= h(0)");
    if (f(z) < f1 - slack) throw std::invalid_argument("dissipation requires f(z) >= f(1)");
    if (h.d2(z) < -slack) throw std::invalid_argument("degradation must be convex");
    if (f.d2(z) < f_modulus - slack) {
      throw std::invalid_argument("dissipation curvature below declared modulus");
    }
  }
  // Midpoint convexity on sample pairs, independent of the declared d2.
  for (int i = 0; i + 2 < kSamples; i += 3) {
    const double a = -1.0 + 3.0 * i / (kSamples - 1);
    const double b = -1.0 + 3.0 * (i + 2) / (kSamples - 1);
    const double mid = 0.5 * (a + b);
    if (h(mid) > 0.5 * (h(a) + h(b)) + slack) throw std::invalid_argument("h not convex");
    if (f(mid) > 0.5 * (f(a) + f(b)) - 0.125 * f_modulus * (b - a) * (b - a) + slack) {
      throw std::invalid_argument("f not strongly convex");
    }
  }
}

}  // namespace pff
