#include "hetnet/graph.hpp"

namespace hetnet {

int plane_of_target(int target) {
  if (target <= 2) return target;
  return (target - 3) % 3 + 3;
}

bool DNNGraph::has_edge(int s, int t) const {
  return plane_of_edge.count(Edge{s, t}) > 0;
}

int DNNGraph::plane_of(int s, int t) const {
  auto it = plane_of_edge.find(Edge{s, t});
  if (it == plane_of_edge.end())
    throw std::invalid_argument("no edge " + std::to_string(s) + "->" + std::to_string(t));
  return it->second;
}

std::vector<int> DNNGraph::out_planes(int node) const {
  std::vector<int> planes;
  for (const Edge& e : edges)
    if (e.source == node) planes.push_back(plane_of_edge.at(e));
  return planes;
}

std::vector<int> DNNGraph::sources_in_plane(int plane) const {
  std::vector<int> nodes;
  for (const Edge& e : edges)
    if (plane_of_edge.at(e) == plane) nodes.push_back(e.source);
  return nodes;
}

std::vector<std::pair<int, int>> DNNGraph::two_cycles() const {
  std::vector<std::pair<int, int>> cycles;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      if (has_edge(a, b) && has_edge(b, a)) cycles.emplace_back(a, b);
  return cycles;
}

DNNGraph build_graph(int n) {
  if (n < 3) throw std::invalid_argument("DNN graph needs n >= 3, got n = " + std::to_string(n));
  DNNGraph g;
  g.n = n;
  auto wrap = [n](int k) { return (k - 1) % n + 1; };
  for (int k = 1; k <= n; ++k) {
    for (int step : {1, 2}) {
      Edge e{k, wrap(k + step)};
      g.edges.push_back(e);
      g.plane_of_edge[e] = plane_of_target(e.target);
    }
  }
  return g;
}

int expected_edge_count(int n) {
  if (n < 3) throw std::invalid_argument("DNN graph needs n >= 3");
  return 2 * n;
}

nlohmann::json to_json(const DNNGraph& g) {
  nlohmann::json j;
  j["n"] = g.n;
  auto edges = nlohmann::json::array();
  for (const Edge& e : g.edges) edges.push_back({e.source, e.target});
  j["edges"] = edges;
  nlohmann::json planes = nlohmann::json::object();
  for (const auto& [e, p] : g.plane_of_edge)
    planes[std::to_string(e.source) + "->" + std::to_string(e.target)] = p;
  j["planes"] = planes;
  return j;
}

}  // namespace hetnet
