#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "pff/presets.hpp"

namespace pff {

/// Configuration problem with file/line context in the message.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File-backed run configuration. Grammar: '#' or ';' comments, "[section]"
/// headers, "key = value" lines; list values are separated by commas or
/// whitespace. See configs/README.md for every key.
struct RunConfig {
  std::string source = "<config>";

  // [time]
  double T = 1.0;
  int steps = 50;
  // [viscosity]
  double delta = 0.05;
  std::vector<double> delta_list;
  double tau_ratio = 0.0;
  // [material]
  double mu = 1.0;
  double kappa = 1.0;
  double eta = 1e-2;
  // [degradation]
  std::string h_name = "quadratic";
  std::string f_name = "quadratic";
  // [mesh]
  int nx = 16;
  int ny = 16;
  double width = 1.0;
  double height = 1.0;
  std::string mesh_path;
  // [bc]
  LoadPreset preset = LoadPreset::shear;
  double rate = 1.0;
  std::vector<Side> custom_sides;
  Eigen::Matrix2d custom_profile = Eigen::Matrix2d::Zero();
  // [init]
  bool has_notch = false;
  NotchSpec notch;
  // [tol]
  Tolerances tol;
  // [output]
  std::string output_dir;
  int vtk_every = 0;
  // [sweep]
  double plateau_eps = 1e-3;
  int grid_intervals = 2000;
};

RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

MaterialModel make_material(const RunConfig& cfg);
Discretization make_discretization(const RunConfig& cfg);
EvolutionConfig make_evolution_config(const RunConfig& cfg, const Discretization& disc);
ScalarField make_seed(const RunConfig& cfg, const TriMesh& mesh);

}  // namespace pff
