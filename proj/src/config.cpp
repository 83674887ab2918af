#include "pff/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace pff {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  std::size_t line = 0;
};

using Sections = std::map<std::string, std::map<std::string, Entry>>;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"time", {"T", "steps"}},
      {"viscosity", {"delta", "delta_list", "tau_ratio"}},
      {"material", {"mu", "kappa", "eta"}},
      {"degradation", {"h_name", "f_name"}},
      {"mesh", {"nx", "ny", "width", "height", "path"}},
      {"bc", {"preset", "rate", "dirichlet", "profile"}},
      {"init", {"notch", "notch_width", "notch_value"}},
      {"tol", {"stag_tol", "tol_u", "tol_z", "max_inner"}},
      {"output", {"dir", "vtk_every"}},
      {"sweep", {"plateau_eps", "grid_intervals"}},
  };
  return s;
}

class Reader {
 public:
  Reader(const Sections& sections, std::string source) : sections_(sections), source_(std::move(source)) {}

  bool has_section(const std::string& sec) const { return sections_.count(sec) > 0; }

  const Entry* find(const std::string& sec, const std::string& key) const {
    const auto s = sections_.find(sec);
    if (s == sections_.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  [[noreturn]] void fail(const Entry* e, const std::string& sec, const std::string& key,
                         const std::string& msg) const {
    std::string where = source_;
    if (e != nullptr) where += ":" + std::to_string(e->line);
    throw ConfigError(where + ": [" + sec + "] " + key + ": " + msg);
  }

  template <class T>
  bool get(const std::string& sec, const std::string& key, T& out) const {
    const Entry* e = find(sec, key);
    if (e == nullptr) return false;
    out = parse<T>(*e, sec, key);
    return true;
  }

  template <class T>
  void require(const std::string& sec, const std::string& key, T& out) const {
    if (!has_section(sec)) {
      throw ConfigError(source_ + ": missing section [" + sec + "] (needed for key '" + key + "')");
    }
    if (!get(sec, key, out)) throw ConfigError(source_ + ": [" + sec + "] missing required key '" + key + "'");
  }

  std::vector<double> numbers(const Entry& e, const std::string& sec, const std::string& key) const {
    std::string text = e.value;
    std::replace(text.begin(), text.end(), ',', ' ');
    std::istringstream ls(text);
    std::vector<double> out;
    std::string tok;
    while (ls >> tok) out.push_back(to_double(tok, e, sec, key));
    return out;
  }

  std::vector<std::string> words(const Entry& e) const {
    std::string text = e.value;
    std::replace(text.begin(), text.end(), ',', ' ');
    std::istringstream ls(text);
    std::vector<std::string> out;
    std::string tok;
    while (ls >> tok) out.push_back(tok);
    return out;
  }

 private:
  double to_double(const std::string& tok, const Entry& e, const std::string& sec,
                   const std::string& key) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) fail(&e, sec, key, "not a number: '" + tok + "'");
      return v;
    } catch (const std::logic_error&) {
      fail(&e, sec, key, "not a number: '" + tok + "'");
    }
  }

  template <class T>
  T parse(const Entry& e, const std::string& sec, const std::string& key) const {
    if constexpr (std::is_same_v<T, std::string>) {
      return e.value;
    } else if constexpr (std::is_same_v<T, int>) {
      int v = 0;
      const auto* end = e.value.data() + e.value.size();
      const auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
      if (ec != std::errc() || ptr != end) fail(&e, sec, key, "not an integer: '" + e.value + "'");
      return v;
    } else {
      return to_double(e.value, e, sec, key);
    }
  }

  const Sections& sections_;
  std::string source_;
};

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& source) {
  Sections sections;
  std::string current;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find_first_of("#;");
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header '" + line + "'");
      current = trim(line.substr(1, line.size() - 2));
      if (schema().count(current) == 0) throw ConfigError(where + ": unknown section [" + current + "]");
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    if (current.empty()) throw ConfigError(where + ": key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (schema().at(current).count(key) == 0) {
      throw ConfigError(where + ": unknown key '" + key + "' in [" + current + "]");
    }
    if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
    if (sections[current].count(key) > 0) throw ConfigError(where + ": duplicate key '" + key + "'");
    sections[current][key] = {value, line_no};
  }

  const Reader r(sections, source);
  RunConfig cfg;
  cfg.source = source;

  r.require("time", "T", cfg.T);
  r.require("time", "steps", cfg.steps);
  if (!(cfg.T > 0.0)) r.fail(r.find("time", "T"), "time", "T", "must be positive");
  if (cfg.steps < 1) r.fail(r.find("time", "steps"), "time", "steps", "must be >= 1");

  if (!r.has_section("viscosity")) throw ConfigError(source + ": missing section [viscosity] (key 'delta')");
  const bool has_delta = r.get("viscosity", "delta", cfg.delta);
  if (const Entry* e = r.find("viscosity", "delta_list")) cfg.delta_list = r.numbers(*e, "viscosity", "delta_list");
  if (!has_delta && cfg.delta_list.empty()) {
    throw ConfigError(source + ": [viscosity] missing required key 'delta'");
  }
  if (!has_delta) cfg.delta = cfg.delta_list.front();
  if (!(cfg.delta > 0.0)) r.fail(r.find("viscosity", "delta"), "viscosity", "delta", "must be positive");
  r.get("viscosity", "tau_ratio", cfg.tau_ratio);

  r.get("material", "mu", cfg.mu);
  r.get("material", "kappa", cfg.kappa);
  r.get("material", "eta", cfg.eta);
  r.get("degradation", "h_name", cfg.h_name);
  r.get("degradation", "f_name", cfg.f_name);

  r.get("mesh", "nx", cfg.nx);
  r.get("mesh", "ny", cfg.ny);
  r.get("mesh", "width", cfg.width);
  r.get("mesh", "height", cfg.height);
  r.get("mesh", "path", cfg.mesh_path);
  if (cfg.mesh_path.empty() && (cfg.nx < 1 || cfg.ny < 1 || !(cfg.width > 0.0) || !(cfg.height > 0.0))) {
    throw ConfigError(source + ": [mesh] needs nx, ny >= 1 and positive width, height");
  }

  std::string preset;
  if (r.get("bc", "preset", preset)) {
    try {
      cfg.preset = preset_from_name(preset);
    } catch (const std::invalid_argument& err) {
      r.fail(r.find("bc", "preset"), "bc", "preset", err.what());
    }
  }
  r.get("bc", "rate", cfg.rate);
  if (const Entry* e = r.find("bc", "dirichlet")) {
    for (const auto& w : r.words(*e)) {
      if (w == "all") {
        cfg.custom_sides = {Side::bottom, Side::right, Side::top, Side::left};
        continue;
      }
      try {
        cfg.custom_sides.push_back(side_from_name(w));
      } catch (const std::invalid_argument& err) {
        r.fail(e, "bc", "dirichlet", err.what());
      }
    }
  }
  if (const Entry* e = r.find("bc", "profile")) {
    const auto v = r.numbers(*e, "bc", "profile");
    if (v.size() != 4) r.fail(e, "bc", "profile", "expected 4 numbers a11 a12 a21 a22");
    cfg.custom_profile << v[0], v[1], v[2], v[3];
  }
  if (cfg.preset == LoadPreset::custom && cfg.custom_sides.empty() && cfg.mesh_path.empty()) {
    throw ConfigError(source + ": [bc] custom preset requires 'dirichlet'");
  }

  if (const Entry* e = r.find("init", "notch")) {
    const auto v = r.numbers(*e, "init", "notch");
    if (v.size() != 4) r.fail(e, "init", "notch", "expected 4 numbers x0 y0 x1 y1");
    cfg.has_notch = true;
    cfg.notch.a = Point(v[0], v[1]);
    cfg.notch.b = Point(v[2], v[3]);
  }
  r.get("init", "notch_width", cfg.notch.width);
  r.get("init", "notch_value", cfg.notch.value);
  if (cfg.notch.value < 0.0 || cfg.notch.value > 1.0) {
    r.fail(r.find("init", "notch_value"), "init", "notch_value", "must lie in [0, 1]");
  }

  r.get("tol", "stag_tol", cfg.tol.stag_tol);
  r.get("tol", "tol_u", cfg.tol.tol_u);
  r.get("tol", "tol_z", cfg.tol.tol_z);
  r.get("tol", "max_inner", cfg.tol.max_inner);

  r.get("output", "dir", cfg.output_dir);
  r.get("output", "vtk_every", cfg.vtk_every);

  r.get("sweep", "plateau_eps", cfg.plateau_eps);
  r.get("sweep", "grid_intervals", cfg.grid_intervals);

  try {
    make_material(cfg).validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(source + ": [material]/[degradation]: " + err.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  return parse_config(in, path);
}

MaterialModel make_material(const RunConfig& cfg) {
  MaterialModel m;
  m.mu = cfg.mu;
  m.kappa = cfg.kappa;
  m.h = degradation_by_name(cfg.h_name, cfg.eta);
  m.f = dissipation_by_name(cfg.f_name);
  m.f_modulus = 2.0;
  return m;
}

Discretization make_discretization(const RunConfig& cfg) {
  if (!cfg.mesh_path.empty()) {
    try {
      return Discretization(read_mesh_file(cfg.mesh_path));
    } catch (const std::exception& err) {
      throw ConfigError(cfg.source + ": [mesh] path: " + err.what());
    }
  }
  const auto sides = cfg.preset == LoadPreset::custom ? cfg.custom_sides : preset_sides(cfg.preset);
  return Discretization(
      build_structured_mesh(cfg.nx, cfg.ny, cfg.width, cfg.height, side_markers(sides, cfg.width, cfg.height)));
}

EvolutionConfig make_evolution_config(const RunConfig& cfg, const Discretization& disc) {
  EvolutionConfig ec;
  ec.T = cfg.T;
  ec.steps = cfg.steps;
  ec.delta = cfg.delta;
  ec.material = make_material(cfg);
  ec.tol = cfg.tol;
  double height = cfg.height;
  if (!cfg.mesh_path.empty()) {
    height = 0.0;
    for (const auto& p : disc.mesh.nodes()) height = std::max(height, p.y());
  }
  ec.load = cfg.preset == LoadPreset::custom ? affine_load(cfg.custom_profile, cfg.rate)
                                             : preset_load(cfg.preset, cfg.rate, height);
  return ec;
}

ScalarField make_seed(const RunConfig& cfg, const TriMesh& mesh) {
  if (!cfg.has_notch) return ScalarField::Ones(static_cast<Eigen::Index>(mesh.node_count()));
  return notch_seed(mesh, cfg.notch);
}

}  // namespace pff
