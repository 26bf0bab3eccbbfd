#pragma once
// Double-next-neighbour digraph: n nodes, edges k -> k+1 and k -> k+2 (cyclic),
// with every edge assigned to the invariant coordinate plane that carries it.

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace hetnet {

struct Edge {
  int source = 0;
  int target = 0;
  bool operator==(const Edge&) const = default;
  auto operator<=>(const Edge&) const = default;
};

// Plane index carrying all incoming connections of node `target`:
// targets 1 and 2 get their own planes; from 3 on the planes cycle mod 3.
int plane_of_target(int target);

struct DNNGraph {
  int n = 0;
  std::vector<Edge> edges;                // ordered (k,k+1),(k,k+2) for k=1..n
  std::map<Edge, int> plane_of_edge;

  bool has_edge(int s, int t) const;
  int plane_of(int s, int t) const;       // throws if the edge is absent
  std::vector<int> out_planes(int node) const;  // planes carrying outgoing edges
  std::vector<int> sources_in_plane(int plane) const;  // nodes with an outgoing edge there

  // node pairs {a,b} joined in both directions; empty for n >= 5
  std::vector<std::pair<int, int>> two_cycles() const;
};

// The unique DNN graph on n >= 3 nodes (1-based node indices).
DNNGraph build_graph(int n);

int expected_edge_count(int n);  // 2n

nlohmann::json to_json(const DNNGraph& g);

}  // namespace hetnet
