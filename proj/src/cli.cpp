#include "pff/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pff/oracle.hpp"

namespace pff {

namespace fs = std::filesystem;

namespace {

std::string step_tag(int step) { return "step " + std::to_string(step) + ": "; }

std::string sci(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(3) << v;
  return s.str();
}

void check_column(std::vector<std::string>& out, int step, const char* name, double trace, double recomputed) {
  const double tol = 1e-9 * (1.0 + std::abs(recomputed));
  if (!(std::abs(trace - recomputed) <= tol)) {
    out.push_back(step_tag(step) + "column " + name + " = " + sci(trace) + " disagrees with the state dump (" +
                  sci(recomputed) + ")");
  }
}

}  // namespace

RunAudit audit_run(const std::vector<StepRecord>& trace, const StateDump* dump, const EvolutionConfig& config,
                   const Discretization& disc) {
  RunAudit audit;
  auto& v = audit.violations;
  if (trace.empty()) {
    v.push_back("trace has no rows");
    return audit;
  }
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& r = trace[i];
    if (r.step != static_cast<int>(i)) {
      v.push_back(step_tag(r.step) + "expected step index " + std::to_string(i));
      return audit;
    }
    if (i == 0) continue;
    if (!(r.t > trace[i - 1].t)) v.push_back(step_tag(r.step) + "time not increasing");
    if (!(r.slope_id_rel_err <= kIdentityTol)) {
      v.push_back(step_tag(r.step) + "slope identity error " + sci(r.slope_id_rel_err));
    }
    if (!(r.align_rel_err <= kIdentityTol)) {
      v.push_back(step_tag(r.step) + "alignment error " + sci(r.align_rel_err));
    }
    const double ode = std::abs(config.delta * r.rate_L2 - r.slope) / (1.0 + r.slope);
    if (!(ode <= kIdentityTol)) v.push_back(step_tag(r.step) + "viscous ODE identity error " + sci(ode));
    if (r.cum_arc_len < trace[i - 1].cum_arc_len) v.push_back(step_tag(r.step) + "arc length decreased");
  }

  std::vector<StepRecord> records = trace;
  if (dump != nullptr) {
    audit.states_checked = true;
    if (dump->states.size() != trace.size()) {
      v.push_back("state dump has " + std::to_string(dump->states.size()) + " states, trace has " +
                  std::to_string(trace.size()) + " rows");
      return audit;
    }
    const auto& m = config.material;
    for (std::size_t i = 0; i < dump->states.size(); ++i) {
      const int step = static_cast<int>(i);
      const State& s = dump->states[i];
      if (dump->times[i] != trace[i].t) v.push_back(step_tag(step) + "state dump time differs from trace");
      const VectorField g = config.load.at(disc.mesh, trace[i].t);
      for (Index node : disc.mesh.dirichlet_nodes()) {
        for (int c = 0; c < 2; ++c) {
          const auto k = static_cast<Eigen::Index>(2 * node + c);
          if (std::abs(s.u[k] - g[k]) > 1e-12 * (1.0 + std::abs(g[k]))) {
            v.push_back(step_tag(step) + "Dirichlet datum violated at node " + std::to_string(node));
          }
        }
      }
      const double eq = free_dof_residual(s.u, s.z, disc, m);
      if (!(eq <= config.tol.tol_u)) v.push_back(step_tag(step) + "equilibrium residual " + sci(eq));
      if (i == 0) {
        const StepRecord r0 = initial_record(s, config, disc);
        check_column(v, step, "F", trace[0].F, r0.F);
        continue;
      }
      const State& prev = dump->states[i - 1];
      for (Eigen::Index k = 0; k < s.z.size(); ++k) {
        if (s.z[k] > prev.z[k]) {
          v.push_back(step_tag(step) + "irreversibility violated at node " + std::to_string(k) + " (z = " +
                      sci(s.z[k]) + " > previous " + sci(prev.z[k]) + ")");
        }
      }
      StepRecord r = audit_step(prev, s, step, trace[i - 1].t, trace[i].t, config, disc);
      check_column(v, step, "F", trace[i].F, r.F);
      check_column(v, step, "E", trace[i].E, r.E);
      check_column(v, step, "D", trace[i].D, r.D);
      check_column(v, step, "slope", trace[i].slope, r.slope);
      check_column(v, step, "rate_L2", trace[i].rate_L2, r.rate_L2);
      check_column(v, step, "power", trace[i].power, r.power);
      r.inner_iters = trace[i].inner_iters;
      r.cum_arc_len = trace[i].cum_arc_len;
      records[i] = r;
    }
  }

  const double tau = trace.size() > 1 ? trace[1].t - trace[0].t : config.tau();
  audit.energy = energy_inequality_report(records, config.delta, tau);
  if (!audit.energy.passed) {
    v.push_back(step_tag(audit.energy.first_violation) + "energy inequality violated (min fitted slack " +
                sci(audit.energy.min_slack_fitted) + ")");
  }
  return audit;
}

namespace {

struct Common {
  std::string config_path;
  std::string output;
  std::uint64_t seed = 0;
  bool quiet = false;
};

std::string resolve_output(const Common& c, const RunConfig* cfg) {
  if (!c.output.empty()) return c.output;
  if (const char* env = std::getenv("PFF_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  if (cfg != nullptr && !cfg->output_dir.empty()) return cfg->output_dir;
  return "out";
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  return out;
}

int report_violations(const RunAudit& audit, bool quiet) {
  for (const auto& msg : audit.violations) std::cerr << "violation: " << msg << '\n';
  if (!quiet) {
    std::cout << "energy audit: C_R = " << sci(audit.energy.c_r) << ", min raw slack "
              << sci(audit.energy.min_slack_raw) << ", min fitted slack " << sci(audit.energy.min_slack_fitted)
              << '\n';
  }
  return audit.violations.empty() ? kExitOk : kExitInvariant;
}

int cmd_run(const Common& c) {
  const RunConfig cfg = load_config(c.config_path);
  const Discretization disc = make_discretization(cfg);
  const EvolutionConfig ec = make_evolution_config(cfg, disc);
  const fs::path dir = resolve_output(c, &cfg);
  fs::create_directories(dir);
  if (cfg.vtk_every > 0) fs::create_directories(dir / "vtk");

  const State s0 = prepare_initial_state(ec, disc, make_seed(cfg, disc.mesh));
  auto trace = open_out(dir / "trace.csv");
  write_trace_header(trace);
  const auto observer = [&](const StepRecord& r, const State& s) {
    write_trace_row(trace, r);
    if (cfg.vtk_every > 0 && (r.step % cfg.vtk_every == 0 || r.step == ec.steps)) {
      char name[32];
      std::snprintf(name, sizeof name, "state_%05d.vtk", r.step);
      write_vtk(s, disc.mesh, (dir / "vtk" / name).string());
    }
    if (!c.quiet) {
      std::cout << "step " << r.step << " t=" << r.t << " F=" << r.F << " slope=" << r.slope
                << " inner=" << r.inner_iters << '\n';
    }
  };
  const Trajectory traj = run_evolution(ec, disc, s0, observer);
  trace.close();
  {
    auto states = open_out(dir / "states.csv");
    write_states_csv(states, traj);
  }
  for (const auto& w : traj.warnings) std::cerr << "warning: " << w << '\n';

  const StateDump dump{traj.times, traj.states};
  const RunAudit audit = audit_run(traj.records, &dump, ec, disc);
  {
    auto out = open_out(dir / "audit.csv");
    write_audit_csv(out, audit.energy);
  }
  return report_violations(audit, c.quiet);
}

int cmd_sweep(const Common& c) {
  const RunConfig cfg = load_config(c.config_path);
  if (cfg.delta_list.empty()) throw ConfigError(cfg.source + ": [viscosity] sweep needs 'delta_list'");
  const Discretization disc = make_discretization(cfg);
  const EvolutionConfig ec = make_evolution_config(cfg, disc);
  const fs::path dir = resolve_output(c, &cfg);
  fs::create_directories(dir);

  SweepOptions opt;
  opt.tau_ratio = cfg.tau_ratio;
  opt.grid_intervals = cfg.grid_intervals;
  opt.plateau_eps = cfg.plateau_eps;
  const State s0 = prepare_initial_state(ec, disc, make_seed(cfg, disc.mesh));
  SweepReport rep;
  try {
    rep = delta_sweep(ec, disc, s0, cfg.delta_list, opt);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(cfg.source + ": " + err.what());
  }
  {
    auto out = open_out(dir / "sweep.csv");
    write_sweep_csv(out, rep);
  }
  RunAudit total;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& traj = rep.trajectories[i];
    const std::string tag = "delta_" + std::to_string(i);
    {
      auto out = open_out(dir / ("trace_" + tag + ".csv"));
      write_trace_csv(out, traj.records);
    }
    {
      auto out = open_out(dir / ("reparam_" + tag + ".csv"));
      write_reparam_csv(out, rep.reparams[i]);
    }
    const StateDump dump{traj.times, traj.states};
    RunAudit a = audit_run(traj.records, &dump, traj.config, disc);
    for (auto& msg : a.violations) total.violations.push_back("delta " + format_real(rep.rows[i].delta) + ", " + msg);
    if (!c.quiet) {
      const auto& r = rep.rows[i];
      std::cout << "delta=" << r.delta << " steps=" << r.steps << " S=" << r.arc_length
                << " max_advancing_slope=" << r.max_advancing_slope
                << " dist_next=" << r.pairwise_distance_to_next << '\n';
    }
  }
  if (!c.quiet) {
    std::cout << "arc length spread " << rep.arc_length_spread << ", growth " << rep.growth << '\n';
  }
  for (const auto& msg : total.violations) std::cerr << "violation: " << msg << '\n';
  return total.violations.empty() ? kExitOk : kExitInvariant;
}

int cmd_check(const Common& c, std::string trace_path, std::string states_path) {
  const RunConfig cfg = load_config(c.config_path);
  const Discretization disc = make_discretization(cfg);
  const EvolutionConfig ec = make_evolution_config(cfg, disc);
  const fs::path dir = resolve_output(c, &cfg);
  if (trace_path.empty()) trace_path = (dir / "trace.csv").string();
  if (states_path.empty() && fs::exists(dir / "states.csv")) states_path = (dir / "states.csv").string();

  std::ifstream tin(trace_path);
  if (!tin) throw IoError(trace_path + ": cannot open");
  const auto trace = read_trace_csv(tin, trace_path);
  StateDump dump;
  const StateDump* dump_ptr = nullptr;
  if (!states_path.empty()) {
    std::ifstream sin(states_path);
    if (!sin) throw IoError(states_path + ": cannot open");
    dump = read_states_csv(sin, disc.node_count(), states_path);
    dump_ptr = &dump;
  }
  const RunAudit audit = audit_run(trace, dump_ptr, ec, disc);
  const int code = report_violations(audit, c.quiet);
  if (!c.quiet && code == kExitOk) {
    std::cout << "check passed: " << trace.size() << " rows" << (audit.states_checked ? " with state dump" : "")
              << '\n';
  }
  return code;
}

int cmd_mesh_gen(const Common& c) {
  const RunConfig cfg = load_config(c.config_path);
  const Discretization disc = make_discretization(cfg);
  const fs::path dir = resolve_output(c, &cfg);
  fs::create_directories(dir);
  write_mesh_file((dir / "mesh.txt").string(), disc.mesh);
  const State s{VectorField::Zero(static_cast<Eigen::Index>(2 * disc.node_count())), make_seed(cfg, disc.mesh)};
  write_vtk(s, disc.mesh, (dir / "mesh.vtk").string());
  if (!c.quiet) {
    std::cout << "mesh: " << disc.node_count() << " nodes, " << disc.mesh.triangle_count() << " triangles, "
              << disc.mesh.dirichlet_nodes().size() << " Dirichlet nodes\n";
  }
  return kExitOk;
}

int cmd_oracle(const Common& c, bool has_output) {
  const auto verdicts = oracle::run_oracle_suite(c.seed);
  if (!c.quiet) oracle::write_verdicts(std::cout, verdicts);
  if (has_output) {
    const fs::path dir = resolve_output(c, nullptr);
    fs::create_directories(dir);
    auto out = open_out(dir / "oracle.csv");
    oracle::write_verdicts(out, verdicts);
  }
  bool ok = true;
  for (const auto& v : verdicts) {
    if (!v.pass) {
      ok = false;
      std::cerr << "oracle mismatch: " << v.name << " err " << sci(v.rel_err) << " > " << sci(v.tolerance) << '\n';
    }
  }
  return ok ? kExitOk : kExitInvariant;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Phase-field fracture solver (viscous alternate minimization)"};
  app.require_subcommand(1);
  Common common;
  app.add_option("-o,--output", common.output, "Output directory (fallback: PFF_OUTPUT_DIR, [output] dir)");
  app.add_option("--seed", common.seed, "Seed for randomized checks");
  app.add_flag("--quiet", common.quiet, "Suppress progress output");

  auto* run = app.add_subcommand("run", "Run one trajectory");
  auto* sweep = app.add_subcommand("sweep", "Run a viscosity sweep over [viscosity] delta_list");
  auto* check = app.add_subcommand("check", "Re-audit an existing trace and state dump");
  auto* mesh = app.add_subcommand("mesh-gen", "Write the configured mesh");
  auto* orc = app.add_subcommand("oracle", "Run the oracle suite");
  for (auto* sub : {run, sweep, check, mesh}) {
    sub->add_option("config", common.config_path, "Config file")->required();
  }
  std::string trace_path, states_path;
  check->add_option("--trace", trace_path, "Trace CSV (default: <output>/trace.csv)");
  check->add_option("--states", states_path, "State dump (default: <output>/states.csv if present)");
  for (auto* sub : {run, sweep, check, mesh, orc}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(common);
    if (*sweep) return cmd_sweep(common);
    if (*check) return cmd_check(common, trace_path, states_path);
    if (*mesh) return cmd_mesh_gen(common);
    if (*orc) return cmd_oracle(common, !common.output.empty() || std::getenv("PFF_OUTPUT_DIR") != nullptr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NonConvergenceError& e) {
    std::cerr << "non-convergence: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace pff
