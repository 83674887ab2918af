#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "pff/evolution.hpp"

namespace pff {

/// Boundary sides of the rectangle [0, width] x [0, height].
enum class Side { bottom, right, top, left };

Side side_from_name(const std::string& name);
const char* side_name(Side side);

/// Marks an edge Dirichlet when its midpoint lies on one of the sides.
EdgeMarkerFn side_markers(std::vector<Side> sides, double width, double height);

/// tension: bottom fixed, top pulled by (0, rate t).
/// shear:   bottom fixed, top pulled by (rate t, 0).
/// Both use the affine extension y / height of the top datum.
enum class LoadPreset { tension, shear, custom };

LoadPreset preset_from_name(const std::string& name);
const char* preset_name(LoadPreset preset);

std::vector<Side> preset_sides(LoadPreset preset);
BoundaryLoad preset_load(LoadPreset preset, double rate, double height);
/// g(t, x) = rate t A x.
BoundaryLoad affine_load(const Eigen::Matrix2d& A, double rate);

struct NotchSpec {
  Point a = Point::Zero();
  Point b = Point::Zero();
  double width = 0.0;
  double value = 0.05;
};

/// Phase-field seed: 1 everywhere except nodes within notch.width of the
/// segment [a, b], which get notch.value.
ScalarField notch_seed(const TriMesh& mesh, const NotchSpec& notch);

double distance_to_segment(const Point& p, const Point& a, const Point& b);

}  // namespace pff
