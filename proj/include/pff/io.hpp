#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "pff/reparam.hpp"

namespace pff {

/// Read or write failure with file/line context.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kTraceHeader =
    "step,t,F,E,D,slope,rate_L2,rate_H1,power,inner_iters,slope_id_rel_err,align_rel_err,cum_arc_len";
inline constexpr const char* kSweepHeader =
    "delta,S,max_norm_residual,max_advancing_slope,pairwise_distance_to_next";
inline constexpr const char* kReparamHeader = "s,t,dt_ds,dz_H1,dz_L2,slope,pde_residual";
inline constexpr const char* kAuditHeader = "step,t,F,bound,slack_raw,increment_sum,slack_fitted";
inline constexpr const char* kStatesHeader = "step,t,node,ux,uy,z";

/// 17 significant digits, enough to round-trip a double.
std::string format_real(double v);

void write_trace_header(std::ostream& out);
void write_trace_row(std::ostream& out, const StepRecord& r);
void write_trace_csv(std::ostream& out, const std::vector<StepRecord>& records);
/// Parses a trace; the header must match kTraceHeader exactly.
std::vector<StepRecord> read_trace_csv(std::istream& in, const std::string& source = "<trace>");

/// Every state of a trajectory, one row per (step, node).
void write_states_csv(std::ostream& out, const Trajectory& traj);

struct StateDump {
  std::vector<double> times;
  std::vector<State> states;
};

StateDump read_states_csv(std::istream& in, std::size_t node_count, const std::string& source = "<states>");

void write_vtk(std::ostream& out, const State& state, const TriMesh& mesh);
void write_vtk(const State& state, const TriMesh& mesh, const std::string& path);

void write_sweep_csv(std::ostream& out, const SweepReport& report);
void write_reparam_csv(std::ostream& out, const ReparamTrajectory& rt);
void write_audit_csv(std::ostream& out, const EnergyAudit& audit);

}  // namespace pff
