#include "pff/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pff {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ls(line);
  while (std::getline(ls, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

double parse_real(const std::string& cell, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used == cell.size()) return v;
  } catch (const std::logic_error&) {
  }
  // stod rejects "nan" and "inf" spellings written by printf on some libcs.
  if (cell == "nan" || cell == "-nan") return std::nan("");
  if (cell == "inf") return INFINITY;
  if (cell == "-inf") return -INFINITY;
  throw IoError(where + ": not a number: '" + cell + "'");
}

long parse_int(const std::string& cell, const std::string& where) {
  try {
    std::size_t used = 0;
    const long v = std::stol(cell, &used);
    if (used == cell.size()) return v;
  } catch (const std::logic_error&) {
  }
  throw IoError(where + ": not an integer: '" + cell + "'");
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_header(std::ostream& out) { out << kTraceHeader << '\n'; }

void write_trace_row(std::ostream& out, const StepRecord& r) {
  out << r.step << ',' << format_real(r.t) << ',' << format_real(r.F) << ',' << format_real(r.E) << ','
      << format_real(r.D) << ',' << format_real(r.slope) << ',' << format_real(r.rate_L2) << ','
      << format_real(r.rate_H1) << ',' << format_real(r.power) << ',' << r.inner_iters << ','
      << format_real(r.slope_id_rel_err) << ',' << format_real(r.align_rel_err) << ','
      << format_real(r.cum_arc_len) << '\n';
}

void write_trace_csv(std::ostream& out, const std::vector<StepRecord>& records) {
  write_trace_header(out);
  for (const auto& r : records) write_trace_row(out, r);
}

std::vector<StepRecord> read_trace_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw IoError(source + ":1: empty file");
  if (strip_cr(line) != kTraceHeader) throw IoError(source + ":1: header mismatch");
  std::vector<StepRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    const auto c = split_csv(line);
    if (c.size() != 13) {
      throw IoError(where + ": expected 13 columns, got " + std::to_string(c.size()));
    }
    StepRecord r;
    r.step = static_cast<int>(parse_int(c[0], where));
    r.t = parse_real(c[1], where);
    r.F = parse_real(c[2], where);
    r.E = parse_real(c[3], where);
    r.D = parse_real(c[4], where);
    r.slope = parse_real(c[5], where);
    r.rate_L2 = parse_real(c[6], where);
    r.rate_H1 = parse_real(c[7], where);
    r.power = parse_real(c[8], where);
    r.inner_iters = static_cast<int>(parse_int(c[9], where));
    r.slope_id_rel_err = parse_real(c[10], where);
    r.align_rel_err = parse_real(c[11], where);
    r.cum_arc_len = parse_real(c[12], where);
    out.push_back(r);
  }
  return out;
}

void write_states_csv(std::ostream& out, const Trajectory& traj) {
  out << kStatesHeader << '\n';
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const State& s = traj.states[i];
    const auto n = s.z.size();
    for (Eigen::Index k = 0; k < n; ++k) {
      out << i << ',' << format_real(traj.times[i]) << ',' << k << ',' << format_real(s.u[2 * k]) << ','
          << format_real(s.u[2 * k + 1]) << ',' << format_real(s.z[k]) << '\n';
    }
  }
}

StateDump read_states_csv(std::istream& in, std::size_t node_count, const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != kStatesHeader) {
    throw IoError(source + ":1: header mismatch");
  }
  const auto n = static_cast<Eigen::Index>(node_count);
  StateDump dump;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    const auto c = split_csv(line);
    if (c.size() != 6) throw IoError(where + ": expected 6 columns");
    const long step = parse_int(c[0], where);
    const long node = parse_int(c[2], where);
    if (step < 0 || node < 0 || node >= n) throw IoError(where + ": index out of range");
    const auto s = static_cast<std::size_t>(step);
    if (s == dump.states.size()) {
      if (node != 0) throw IoError(where + ": step " + std::to_string(step) + " must start at node 0");
      dump.times.push_back(parse_real(c[1], where));
      dump.states.push_back({VectorField::Zero(2 * n), ScalarField::Zero(n)});
    } else if (s + 1 != dump.states.size()) {
      throw IoError(where + ": steps out of order");
    }
    State& st = dump.states.back();
    st.u[2 * node] = parse_real(c[3], where);
    st.u[2 * node + 1] = parse_real(c[4], where);
    st.z[node] = parse_real(c[5], where);
  }
  return dump;
}

void write_vtk(std::ostream& out, const State& state, const TriMesh& mesh) {
  const auto n = mesh.node_count();
  const auto m = mesh.triangle_count();
  out << "# vtk DataFile Version 3.0\n";
  out << "phase-field state\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << n << " double\n";
  for (const auto& p : mesh.nodes()) out << format_real(p.x()) << ' ' << format_real(p.y()) << " 0\n";
  out << "CELLS " << m << ' ' << 4 * m << '\n';
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << m << '\n';
  for (std::size_t e = 0; e < m; ++e) out << "5\n";
  out << "POINT_DATA " << n << '\n';
  out << "VECTORS displacement double\n";
  for (std::size_t i = 0; i < n; ++i) {
    out << format_real(state.u[2 * i]) << ' ' << format_real(state.u[2 * i + 1]) << " 0\n";
  }
  out << "SCALARS phase double 1\n";
  out << "LOOKUP_TABLE default\n";
  for (std::size_t i = 0; i < n; ++i) out << format_real(state.z[i]) << '\n';
}

void write_vtk(const State& state, const TriMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path + ": cannot open for writing");
  write_vtk(out, state, mesh);
  if (!out) throw IoError(path + ": write failed");
}

void write_sweep_csv(std::ostream& out, const SweepReport& report) {
  out << kSweepHeader << '\n';
  for (const auto& r : report.rows) {
    out << format_real(r.delta) << ',' << format_real(r.arc_length) << ',' << format_real(r.max_norm_residual)
        << ',' << format_real(r.max_advancing_slope) << ',' << format_real(r.pairwise_distance_to_next) << '\n';
  }
}

void write_reparam_csv(std::ostream& out, const ReparamTrajectory& rt) {
  out << kReparamHeader << '\n';
  for (std::size_t j = 0; j < rt.s.size(); ++j) {
    out << format_real(rt.s[j]) << ',' << format_real(rt.t[j]) << ',' << format_real(rt.dt_ds[j]) << ','
        << format_real(rt.dz_H1[j]) << ',' << format_real(rt.dz_L2[j]) << ',' << format_real(rt.slope[j]) << ','
        << format_real(rt.pde_residual[j]) << '\n';
  }
}

void write_audit_csv(std::ostream& out, const EnergyAudit& audit) {
  out << kAuditHeader << '\n';
  for (const auto& r : audit.rows) {
    out << r.step << ',' << format_real(r.t) << ',' << format_real(r.F) << ',' << format_real(r.bound) << ','
        << format_real(r.slack_raw) << ',' << format_real(r.increment_sum) << ',' << format_real(r.slack_fitted)
        << '\n';
  }
}

}  // namespace pff
