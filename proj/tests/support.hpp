#pragma once

#include <random>
#include <string>

#include "pff/config.hpp"
#include "pff/presets.hpp"
#include "pff/tensor.hpp"

namespace pff::testing {

inline SymTensor2 random_tensor(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  return {d(rng), d(rng), d(rng)};
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

inline Discretization square(int cells, std::vector<Side> sides = {Side::bottom, Side::top}, double size = 1.0) {
  return Discretization(build_structured_mesh(cells, cells, size, size, side_markers(std::move(sides), size, size)));
}

inline std::string config_path(const std::string& name) {
  return std::string(PFF_SOURCE_DIR) + "/configs/" + name;
}

/// A preset config file turned into the objects a run needs.
struct Case {
  RunConfig run;
  Discretization disc;
  EvolutionConfig config;
  ScalarField seed;

  explicit Case(RunConfig cfg)
      : run(std::move(cfg)),
        disc(make_discretization(run)),
        config(make_evolution_config(run, disc)),
        seed(make_seed(run, disc.mesh)) {}
};

inline Case load_case(const std::string& name) { return Case(load_config(config_path(name))); }

}  // namespace pff::testing
