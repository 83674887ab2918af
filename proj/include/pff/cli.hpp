#pragma once

#include <string>
#include <vector>

#include "pff/config.hpp"
#include "pff/io.hpp"

namespace pff {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvariant = 1,
  kExitConfig = 2,
  kExitNonConvergence = 3,
};

/// Identity and certificate thresholds used by `run` and `check`.
inline constexpr double kIdentityTol = 1e-6;

struct RunAudit {
  /// One message per violated invariant, each naming its step.
  std::vector<std::string> violations;
  EnergyAudit energy;
  bool states_checked = false;
};

/// Re-audits a trace, and the matching state dump when given, against the
/// run's configuration: identities, viscous ODE, energy inequality,
/// irreversibility, equilibrium, Dirichlet data and agreement of the trace
/// with quantities recomputed from the states.
RunAudit audit_run(const std::vector<StepRecord>& trace, const StateDump* dump, const EvolutionConfig& config,
                   const Discretization& disc);

/// Subcommands: run, sweep, check, mesh-gen, oracle.
int cli_main(int argc, char** argv);

}  // namespace pff
