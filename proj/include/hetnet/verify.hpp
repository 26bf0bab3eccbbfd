// Numerical verification that a constructed field realizes its digraph:
// every prescribed connection is reached by forward integration, no forbidden
// connection exists (blocked nodes are restricted in-plane sinks), axis
// equilibria sit where they must, and node eigenvalue signs encode the graph.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hetnet/construct.hpp"
#include "hetnet/graph.hpp"

namespace hetnet {

struct VerifyParams {
  double delta = 1e-3;    // start offset from the source node
  double eta = 1e-2;      // target ball radius
  double t_max = 1e4;     // integration time budget per edge
  double rel_tol = 1e-8;  // integrator tolerances
  double abs_tol = 1e-10;
  // Optional deterministic work bound per edge (trial steps; 0 = unlimited).
  // An edge cut off by this budget is reported "skipped", never "failed".
  long long max_steps = 0;
};

struct ConnectionReport {
  Edge edge;
  int plane = 0;
  std::string verdict;        // verified | failed | skipped
  double flight_time = 0.0;   // time to ball entry (verified) or to termination
  double miss_distance = 0.0; // closest approach to the target node over the run
  double start_offset = 0.0;
  std::string detail;         // terminal event or wrong-ball note on failure
  int wrong_node = 0;         // set when a different node's ball was entered
  long long nfev = 0;
};

// Integrate from xi_source + delta in the edge plane's y-direction; verified
// iff the trajectory enters the eta-ball of xi_target first. Every other
// node's ball is armed too: entering one fails the edge with that node
// recorded. Throws std::invalid_argument when the edge is not in the graph,
// delta is outside [1e-6, 1e-2], or eta <= delta.
ConnectionReport verify_edge(const VectorFieldSpec& spec, const DNNGraph& graph, Edge edge,
                             const VerifyParams& params);

struct AbsenceReport {
  int plane = 0;
  int node = 0;
  double eig_x = 0.0;  // restricted axis eigenvalue at the node
  double eig_y = 0.0;  // restricted in-plane transverse eigenvalue
  std::string verdict; // verified (sink) | failed
};

// For every node of the plane that is neither a source nor a target of a
// connection there, assert the restricted 2x2 linearization is a sink.
std::vector<AbsenceReport> verify_absence(const VectorFieldSpec& spec, const DNNGraph& graph,
                                          int plane);

struct SignCheckResult {
  bool ok = true;
  std::vector<std::string> violations;
};

// Node transverse-eigenvalue signs must match the graph (positive exactly in
// outgoing-edge planes); axis eigenvalue negative at nodes, positive at the
// even-integer equilibria in between.
SignCheckResult check_sign_patterns(const VectorFieldSpec& spec, const DNNGraph& graph);

struct RealizationReport {
  int n = 0;
  std::string mode;
  double epsilon = 0.0;
  VerifyParams params;
  bool axis_ok = false;
  int axis_count = 0;
  double axis_max_deviation = 0.0;  // max |x - nearest integer| over axis equilibria
  SignCheckResult signs;
  std::vector<ConnectionReport> connections;  // ordered by (plane, source)
  std::vector<AbsenceReport> absences;        // all planes, ascending
  bool overall = false;
  std::vector<std::string> causes;  // itemized failure causes, empty when verified
};

// Aggregate check: axis equilibria count/placement, sign patterns, all edges,
// all absences. Overall verdict is the conjunction.
RealizationReport verify_realization(const VectorFieldSpec& spec, const DNNGraph& graph,
                                     const VerifyParams& params);

// Max scaled-relative deviation |J_ij - FD_ij| / (1 + |J_ij|) between the
// analytic Jacobian and central finite differences (step 1e-6) at `points`
// reproducible pseudo-random interior points drawn from the given seed.
double jacobian_fd_max_error(const VectorFieldSpec& spec, int points, std::uint64_t seed);

nlohmann::json to_json(const RealizationReport& report);

}  // namespace hetnet
