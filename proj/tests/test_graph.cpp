#include <algorithm>
#include <set>

#include <doctest.h>

#include "hetnet/graph.hpp"

using namespace hetnet;

TEST_SUITE("graph") {

TEST_CASE("plane of a target node") {
  CHECK(plane_of_target(1) == 1);
  CHECK(plane_of_target(2) == 2);
  CHECK(plane_of_target(3) == 3);
  CHECK(plane_of_target(4) == 4);
  CHECK(plane_of_target(5) == 5);
  CHECK(plane_of_target(6) == 3);
  CHECK(plane_of_target(7) == 4);
  CHECK(plane_of_target(8) == 5);
  CHECK(plane_of_target(9) == 3);
  CHECK(plane_of_target(12) == 3);
}

TEST_CASE("edge sets: next and double-next neighbours, wrapping") {
  for (int n = 3; n <= 12; ++n) {
    DNNGraph g = build_graph(n);
    CHECK(g.n == n);
    CHECK(static_cast<int>(g.edges.size()) == expected_edge_count(n));
    CHECK(expected_edge_count(n) == 2 * n);
    auto wrap = [n](int v) { return (v - 1) % n + 1; };
    std::set<Edge> want;
    for (int k = 1; k <= n; ++k) {
      want.insert(Edge{k, wrap(k + 1)});
      want.insert(Edge{k, wrap(k + 2)});
    }
    std::set<Edge> got(g.edges.begin(), g.edges.end());
    CHECK(got == want);
  }
}

TEST_CASE("n=3 is the complete digraph on three nodes") {
  DNNGraph g = build_graph(3);
  for (int s = 1; s <= 3; ++s)
    for (int t = 1; t <= 3; ++t)
      CHECK(g.has_edge(s, t) == (s != t));
}

TEST_CASE("plane lookup agrees with the target's plane") {
  for (int n : {3, 4, 5, 6, 7, 10}) {
    DNNGraph g = build_graph(n);
    for (const Edge& e : g.edges) {
      CHECK(g.plane_of(e.source, e.target) == plane_of_target(e.target));
      CHECK(g.plane_of_edge.at(e) == plane_of_target(e.target));
    }
  }
}

TEST_CASE("plane_of on a missing edge throws") {
  DNNGraph g = build_graph(5);
  CHECK(!g.has_edge(1, 4));
  CHECK(!g.has_edge(1, 1));
  CHECK_THROWS_AS((void)g.plane_of(1, 4), std::invalid_argument);
}

TEST_CASE("every node has exactly two outgoing planes") {
  for (int n : {3, 4, 5, 6, 9}) {
    DNNGraph g = build_graph(n);
    for (int k = 1; k <= n; ++k) {
      std::vector<int> planes = g.out_planes(k);
      const int next = k % n + 1;
      const int next2 = next % n + 1;
      // listed in edge order: the neighbour edge first, then the skip edge
      CHECK(planes == std::vector<int>{plane_of_target(next), plane_of_target(next2)});
    }
  }
}

TEST_CASE("sources_in_plane inverts the edge->plane map") {
  for (int n : {4, 6, 8}) {
    DNNGraph g = build_graph(n);
    int total = 0;
    for (int j = 1; j <= 5; ++j) {
      for (int s : g.sources_in_plane(j)) {
        std::vector<int> op = g.out_planes(s);
        CHECK(std::find(op.begin(), op.end(), j) != op.end());
      }
      total += static_cast<int>(g.sources_in_plane(j).size());
    }
    CHECK(total == 2 * n);  // every edge counted once through its plane
  }
}

TEST_CASE("two-node cycles exist only for n = 3 and n = 4") {
  CHECK(build_graph(3).two_cycles() ==
        std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 3}});
  CHECK(build_graph(4).two_cycles() == std::vector<std::pair<int, int>>{{1, 3}, {2, 4}});
  for (int n = 5; n <= 10; ++n) CHECK(build_graph(n).two_cycles().empty());
}

TEST_CASE("n below 3 is rejected") {
  CHECK_THROWS_AS((void)build_graph(2), std::invalid_argument);
  CHECK_THROWS_AS((void)build_graph(0), std::invalid_argument);
}

TEST_CASE("json export lists every edge with its plane") {
  DNNGraph g = build_graph(4);
  nlohmann::json j = to_json(g);
  CHECK(j["n"] == 4);
  CHECK(j["edges"].size() == 8);
  for (const auto& e : j["edges"]) {
    REQUIRE(e.is_array());
    CHECK(g.has_edge(e[0].get<int>(), e[1].get<int>()));
  }
  CHECK(j["planes"].size() == 8);
  for (const auto& [key, plane] : j["planes"].items()) {
    std::size_t arrow = key.find("->");
    Edge edge{std::stoi(key.substr(0, arrow)), std::stoi(key.substr(arrow + 2))};
    CHECK(plane.get<int>() == g.plane_of_edge.at(edge));
  }
}

}  // TEST_SUITE
