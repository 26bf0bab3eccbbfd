#include "hetnet/stability.hpp"

#include <algorithm>
#include <cmath>

#include "hetnet/dynamics.hpp"

namespace hetnet {

namespace {

constexpr double kAlphaTol = 1e-9;  // |alpha - 1| band treated as indeterminate
constexpr double kSignTol = 1e-12;  // eigenvector components this small have no certified sign

// Basic transition matrix for one node: identity of size m with the first
// column replaced by (c/e, -t_1/e, ..., -t_{m-1}/e).
std::vector<double> basic_matrix(const NodeRates& r) {
  int m = 1 + static_cast<int>(r.transverse.size());
  std::vector<double> M(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) M[i * m + i] = 1.0;
  M[0] = r.contracting / r.expanding;
  for (int i = 1; i < m; ++i) M[i * m + 0] = -r.transverse[i - 1] / r.expanding;
  return M;
}

// first * second for matrices that are identity except the first column:
// the product keeps that shape, with first column first * (first column of second).
std::vector<double> compose(const std::vector<double>& first, const std::vector<double>& second,
                            int m) {
  std::vector<double> P(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) P[i * m + i] = 1.0;
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int k = 0; k < m; ++k) s += first[i * m + k] * second[k * m + 0];
    P[i * m + 0] = s;
  }
  return P;
}

SectionAnalysis analyze_section(const NodeRates& start, const NodeRates& other) {
  int m = 1 + static_cast<int>(start.transverse.size());
  SectionAnalysis s;
  s.start_node = start.node;
  s.m = m;
  s.matrix = compose(basic_matrix(start), basic_matrix(other), m);
  s.alpha = s.matrix[0];
  s.eigvec.resize(m);
  s.eigvec[0] = s.alpha - 1.0;
  for (int i = 1; i < m; ++i) s.eigvec[i] = s.matrix[i * m + 0];
  std::vector<double> tail(s.eigvec.begin() + 1, s.eigvec.end());
  s.verdict = classify_return_map(s.alpha, tail);
  return s;
}

NodeRates rates_at(const VectorFieldSpec& spec, int node, int plane_out, int plane_in) {
  NodeRates r;
  r.node = node;
  double x = 2.0 * node - 1.0;
  r.radial = spec.epsilon * spec.axis.ddx(x, 0.0);

  std::vector<double> lambda;
  for (const PlaneComponent& pc : spec.planes) {
    double g = 1.0;
    for (const FactorTerm& t : pc.g) g *= t.value(x, 0.0);
    lambda.push_back(pc.sigma * g);
  }

  double scale = std::abs(r.radial);
  for (double l : lambda) scale = std::max(scale, std::abs(l));
  auto check = [&](double v, const std::string& what) {
    if (std::abs(v) <= 1e-12 * scale)
      throw numerical_error("hyperbolicity failure at node " + std::to_string(node) + ": " + what +
                            " rate " + std::to_string(v) + " is zero within tolerance");
    return v;
  };
  check(r.radial, "radial");

  double le = check(lambda[plane_out - 1], "outgoing-plane");
  double lc = check(lambda[plane_in - 1], "incoming-plane");
  if (le <= 0.0)
    throw numerical_error("node " + std::to_string(node) + ": outgoing plane " +
                          std::to_string(plane_out) + " is not expanding");
  if (lc >= 0.0)
    throw numerical_error("node " + std::to_string(node) + ": incoming plane " +
                          std::to_string(plane_in) + " is not contracting");
  r.expanding = le;
  r.contracting = -lc;
  for (int j = 1; j <= static_cast<int>(lambda.size()); ++j) {
    if (j == plane_out || j == plane_in) continue;
    r.transverse_planes.push_back(j);
    r.transverse.push_back(check(lambda[j - 1], "transverse"));
  }
  return r;
}

CycleVerdict combine(CycleVerdict a, CycleVerdict b) {
  auto rank = [](CycleVerdict v) {
    switch (v) {
      case CycleVerdict::CompletelyUnstable: return 0;
      case CycleVerdict::Indeterminate: return 1;
      case CycleVerdict::FragmentarilyStable: return 2;
    }
    return 1;
  };
  return rank(a) <= rank(b) ? a : b;
}

}  // namespace

const char* cycle_verdict_name(CycleVerdict v) {
  switch (v) {
    case CycleVerdict::CompletelyUnstable: return "completely-unstable";
    case CycleVerdict::Indeterminate: return "indeterminate";
    case CycleVerdict::FragmentarilyStable: return "fragmentarily-asymptotically-stable";
  }
  return "unknown";
}

CycleVerdict classify_return_map(double alpha, const std::vector<double>& tail) {
  if (std::abs(alpha - 1.0) <= kAlphaTol) return CycleVerdict::Indeterminate;
  if (alpha < 1.0) return CycleVerdict::CompletelyUnstable;
  for (double v : tail)
    if (v < -kSignTol) return CycleVerdict::CompletelyUnstable;
  for (double v : tail)
    if (std::abs(v) <= kSignTol) return CycleVerdict::Indeterminate;
  return CycleVerdict::FragmentarilyStable;
}

CycleAnalysis analyze_two_cycle(const VectorFieldSpec& spec, const DNNGraph& graph, int a, int b) {
  if (!graph.has_edge(a, b) || !graph.has_edge(b, a))
    throw std::invalid_argument("nodes " + std::to_string(a) + " and " + std::to_string(b) +
                                " do not form a 2-cycle");
  CycleAnalysis c;
  c.node_a = a;
  c.node_b = b;
  c.plane_ab = graph.plane_of(a, b);
  c.plane_ba = graph.plane_of(b, a);
  c.rates_a = rates_at(spec, a, c.plane_ab, c.plane_ba);
  c.rates_b = rates_at(spec, b, c.plane_ba, c.plane_ab);
  c.section_a = analyze_section(c.rates_a, c.rates_b);
  c.section_b = analyze_section(c.rates_b, c.rates_a);
  c.verdict = combine(c.section_a.verdict, c.section_b.verdict);
  return c;
}

std::vector<CycleAnalysis> analyze_network_cycles(const VectorFieldSpec& spec,
                                                  const DNNGraph& graph) {
  std::vector<CycleAnalysis> out;
  for (const auto& [a, b] : graph.two_cycles()) out.push_back(analyze_two_cycle(spec, graph, a, b));
  return out;
}

namespace {

nlohmann::json rates_json(const NodeRates& r) {
  nlohmann::json j;
  j["node"] = r.node;
  j["radial"] = r.radial;
  j["expanding"] = r.expanding;
  j["contracting"] = r.contracting;
  j["transverse_planes"] = r.transverse_planes;
  j["transverse"] = r.transverse;
  return j;
}

nlohmann::json section_json(const SectionAnalysis& s) {
  nlohmann::json j;
  j["start_node"] = s.start_node;
  j["m"] = s.m;
  j["matrix"] = s.matrix;
  j["alpha"] = s.alpha;
  j["eigvec"] = s.eigvec;
  j["verdict"] = cycle_verdict_name(s.verdict);
  return j;
}

}  // namespace

nlohmann::json cycles_to_json(const std::vector<CycleAnalysis>& cycles) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CycleAnalysis& c : cycles) {
    nlohmann::json j;
    j["nodes"] = {c.node_a, c.node_b};
    j["plane_ab"] = c.plane_ab;
    j["plane_ba"] = c.plane_ba;
    j["rates_a"] = rates_json(c.rates_a);
    j["rates_b"] = rates_json(c.rates_b);
    j["section_a"] = section_json(c.section_a);
    j["section_b"] = section_json(c.section_b);
    j["verdict"] = cycle_verdict_name(c.verdict);
    arr.push_back(j);
  }
  nlohmann::json out;
  out["cycles"] = arr;
  return out;
}

}  // namespace hetnet
