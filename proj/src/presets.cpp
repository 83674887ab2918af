#include "pff/presets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pff {

Side side_from_name(const std::string& name) {
  if (name == "bottom") return Side::bottom;
  if (name == "right") return Side::right;
  if (name == "top") return Side::top;
  if (name == "left") return Side::left;
  throw std::invalid_argument("unknown side '" + name + "'");
}

const char* side_name(Side side) {
  switch (side) {
    case Side::bottom: return "bottom";
    case Side::right: return "right";
    case Side::top: return "top";
    case Side::left: return "left";
  }
  return "?";
}

EdgeMarkerFn side_markers(std::vector<Side> sides, double width, double height) {
  const double tol = 1e-10 * std::max(width, height);
  return [sides = std::move(sides), width, height, tol](const Point& mid) {
    for (Side s : sides) {
      const bool on = (s == Side::bottom && std::abs(mid.y()) <= tol) ||
                      (s == Side::top && std::abs(mid.y() - height) <= tol) ||
                      (s == Side::left && std::abs(mid.x()) <= tol) ||
                      (s == Side::right && std::abs(mid.x() - width) <= tol);
      if (on) return EdgeMarker::dirichlet;
    }
    return EdgeMarker::free;
  };
}

LoadPreset preset_from_name(const std::string& name) {
  if (name == "tension") return LoadPreset::tension;
  if (name == "shear") return LoadPreset::shear;
  if (name == "custom") return LoadPreset::custom;
  throw std::invalid_argument("unknown bc preset '" + name + "'");
}

const char* preset_name(LoadPreset preset) {
  switch (preset) {
    case LoadPreset::tension: return "tension";
    case LoadPreset::shear: return "shear";
    case LoadPreset::custom: return "custom";
  }
  return "?";
}

std::vector<Side> preset_sides(LoadPreset preset) {
  if (preset == LoadPreset::custom) return {};
  return {Side::bottom, Side::top};
}

BoundaryLoad preset_load(LoadPreset preset, double rate, double height) {
  BoundaryLoad load;
  load.rate = rate;
  switch (preset) {
    case LoadPreset::tension:
      load.profile = [height](const Point& p) { return Point(0.0, p.y() / height); };
      break;
    case LoadPreset::shear:
      load.profile = [height](const Point& p) { return Point(p.y() / height, 0.0); };
      break;
    case LoadPreset::custom:
      throw std::invalid_argument("custom preset needs an explicit affine profile");
  }
  return load;
}

BoundaryLoad affine_load(const Eigen::Matrix2d& A, double rate) {
  BoundaryLoad load;
  load.rate = rate;
  load.profile = [A](const Point& p) -> Point { return A * p; };
  return load;
}

double distance_to_segment(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  const double s = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + s * ab)).norm();
}

ScalarField notch_seed(const TriMesh& mesh, const NotchSpec& notch) {
  ScalarField z = ScalarField::Ones(static_cast<Eigen::Index>(mesh.node_count()));
  if (notch.width <= 0.0) return z;
  for (Index i = 0; i < mesh.node_count(); ++i) {
    if (distance_to_segment(mesh.node(i), notch.a, notch.b) <= notch.width) {
      z[static_cast<Eigen::Index>(i)] = notch.value;
    }
  }
  return z;
}

}  // namespace pff
