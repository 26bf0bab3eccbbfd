// Stability analysis of 2-node cycles: local rates at each node, basic
// transition matrices for the return maps through both Poincare sections, and
// a conservative verdict combining the per-section classifications.
#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hetnet/construct.hpp"
#include "hetnet/graph.hpp"

namespace hetnet {

enum class CycleVerdict {
  CompletelyUnstable,    // no nearby trajectory returns: some stability condition fails
  Indeterminate,         // a decisive quantity sits inside the numerical tolerance band
  FragmentarilyStable,   // positive-measure set of attracted initial conditions
};

const char* cycle_verdict_name(CycleVerdict v);

// Linearization rates at one node of a cycle, all derived from the diagonal
// node Jacobian: radial decay, expanding rate in the outgoing plane,
// contracting rate in the incoming plane, and the signed transverse rates.
struct NodeRates {
  int node = 0;
  double radial = 0.0;       // positive decay rate along the axis
  double expanding = 0.0;    // positive rate in the outgoing connection plane
  double contracting = 0.0;  // positive decay rate in the incoming plane
  std::vector<int> transverse_planes;  // ascending plane indices
  std::vector<double> transverse;      // signed rates, matching order
};

// Return map data for the section at start_node: the product of the two basic
// transition matrices (the matrix for the other node applied first), its
// distinguished eigenvalue alpha, and the corresponding eigenvector scaled so
// its first component is alpha - 1.
struct SectionAnalysis {
  int start_node = 0;
  int m = 0;                   // matrix dimension: 1 + number of transverse planes
  std::vector<double> matrix;  // row-major m x m
  double alpha = 0.0;
  std::vector<double> eigvec;
  CycleVerdict verdict = CycleVerdict::Indeterminate;
};

struct CycleAnalysis {
  int node_a = 0, node_b = 0;
  int plane_ab = 0, plane_ba = 0;  // planes carrying a->b and b->a
  NodeRates rates_a, rates_b;
  SectionAnalysis section_a, section_b;
  CycleVerdict verdict = CycleVerdict::Indeterminate;  // conservative conjunction
};

// Analyze the 2-cycle between nodes a and b. Both edges must exist in the
// graph (std::invalid_argument otherwise); rates too close to zero relative
// to the largest one raise numerical_error (hyperbolicity failure).
CycleAnalysis analyze_two_cycle(const VectorFieldSpec& spec, const DNNGraph& graph, int a, int b);

// All 2-cycles of the graph, in the order graph.two_cycles() lists them.
std::vector<CycleAnalysis> analyze_network_cycles(const VectorFieldSpec& spec,
                                                  const DNNGraph& graph);

// Section verdict for a return-map matrix that is the identity except for its
// first column w: alpha = w[0]; eigenvector (alpha-1, w[1], ..., w[m-1]).
CycleVerdict classify_return_map(double alpha, const std::vector<double>& tail);

nlohmann::json cycles_to_json(const std::vector<CycleAnalysis>& cycles);

}  // namespace hetnet
