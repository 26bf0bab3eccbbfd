#include <algorithm>
#include <cmath>
#include <utility>

#include <doctest.h>

#include "hetnet/construct.hpp"
#include "hetnet/graph.hpp"
#include "hetnet/verify.hpp"

using namespace hetnet;

TEST_SUITE("verify") {

TEST_CASE("a curated connection verifies with sensible report fields") {
  VectorFieldSpec s = build_explicit(4, 0.01);
  DNNGraph g = build_graph(4);
  ConnectionReport rep = verify_edge(s, g, Edge{1, 2}, VerifyParams{});
  CHECK(rep.verdict == "verified");
  CHECK(rep.plane == 2);
  CHECK(rep.start_offset == 1e-3);
  CHECK(rep.flight_time > 7.0);
  CHECK(rep.flight_time < 9.0);
  CHECK(rep.miss_distance <= 1e-2);  // verified implies inside the target ball
  CHECK(rep.wrong_node == 0);
  CHECK(rep.nfev > 0);
  CHECK(rep.detail == "entered-ball");
}

TEST_CASE("verdicts and flight times repeat to full precision") {
  VectorFieldSpec s = build_explicit(3, 0.01);
  DNNGraph g = build_graph(3);
  for (const Edge& e : g.edges) {
    ConnectionReport a = verify_edge(s, g, e, VerifyParams{});
    ConnectionReport b = verify_edge(s, g, e, VerifyParams{});
    CHECK(a.verdict == b.verdict);
    CHECK(std::abs(a.flight_time - b.flight_time) <= 1e-9);
    CHECK(a.nfev == b.nfev);
  }
}

TEST_CASE("entering another node's ball fails the edge and names the node") {
  // swap the dynamics of planes 2 and 3: the coordinate labelled plane 2 now
  // carries the connection geometry into node 3
  VectorFieldSpec s = build_explicit(3, 0.01);
  std::swap(s.planes[1], s.planes[2]);
  DNNGraph g = build_graph(3);
  ConnectionReport rep = verify_edge(s, g, Edge{1, 2}, VerifyParams{});
  CHECK(rep.verdict == "failed");
  CHECK(rep.wrong_node == 3);
  CHECK(rep.detail.find("node 3") != std::string::npos);
}

TEST_CASE("step budget reports skipped, not failed") {
  VectorFieldSpec s = build_explicit(4, 0.01);
  DNNGraph g = build_graph(4);
  VerifyParams p;
  p.max_steps = 40;
  ConnectionReport rep = verify_edge(s, g, Edge{1, 2}, p);
  CHECK(rep.verdict == "skipped");
  CHECK(rep.detail == "step-budget-exhausted");
}

TEST_CASE("precondition violations throw") {
  VectorFieldSpec s = build_explicit(4, 0.01);
  DNNGraph g = build_graph(4);
  CHECK_THROWS_AS((void)verify_edge(s, g, Edge{1, 4}, VerifyParams{}), std::invalid_argument);
  VerifyParams bad;
  bad.delta = 1e-7;  // below the supported offset band
  CHECK_THROWS_AS((void)verify_edge(s, g, Edge{1, 2}, bad), std::invalid_argument);
  bad = {};
  bad.delta = 2e-2;  // above it
  CHECK_THROWS_AS((void)verify_edge(s, g, Edge{1, 2}, bad), std::invalid_argument);
  bad = {};
  bad.eta = 5e-4;  // target ball must exceed the start offset
  CHECK_THROWS_AS((void)verify_edge(s, g, Edge{1, 2}, bad), std::invalid_argument);
}

TEST_CASE("absence reports cover exactly the non-participating nodes") {
  VectorFieldSpec s = build_explicit(4, 0.01);
  DNNGraph g = build_graph(4);
  // plane 1 receives 3->1 and 4->1: node 2 is uninvolved
  std::vector<AbsenceReport> a1 = verify_absence(s, g, 1);
  REQUIRE(a1.size() == 1);
  CHECK(a1[0].node == 2);
  CHECK(a1[0].verdict == "verified");
  CHECK(a1[0].eig_x < 0.0);
  CHECK(a1[0].eig_y < 0.0);
  // n=3 planes have no uninvolved nodes at all
  VectorFieldSpec s3 = build_explicit(3, 0.01);
  DNNGraph g3 = build_graph(3);
  for (int j = 1; j <= 3; ++j) CHECK(verify_absence(s3, g3, j).empty());
  CHECK_THROWS_AS((void)verify_absence(s, g, 9), std::invalid_argument);
}

TEST_CASE("sign check flags a deliberately damaged field") {
  VectorFieldSpec s = build_explicit(4, 0.01);
  DNNGraph g = build_graph(4);
  CHECK(check_sign_patterns(s, g).ok);
  s.planes[0].sigma = 1.0;  // flip the contracting plane's sign
  SignCheckResult r = check_sign_patterns(s, g);
  CHECK(!r.ok);
  CHECK(!r.violations.empty());
  CHECK(r.violations[0].find("plane 1") != std::string::npos);
}

TEST_CASE("full realization check passes for the curated systems") {
  for (int n : {3, 4}) {
    VectorFieldSpec s = build_explicit(n, 0.01);
    DNNGraph g = build_graph(n);
    RealizationReport rep = verify_realization(s, g, VerifyParams{});
    CHECK(rep.overall);
    CHECK(rep.causes.empty());
    CHECK(rep.axis_ok);
    CHECK(rep.axis_count == 2 * n - 1);
    CHECK(rep.axis_max_deviation <= 1e-9);
    CHECK(rep.signs.ok);
    REQUIRE(static_cast<int>(rep.connections.size()) == 2 * n);
    for (const ConnectionReport& c : rep.connections) CHECK(c.verdict == "verified");
    // connections are ordered by (plane, source)
    for (std::size_t i = 1; i < rep.connections.size(); ++i) {
      const ConnectionReport& p = rep.connections[i - 1];
      const ConnectionReport& q = rep.connections[i];
      CHECK(std::pair(p.plane, p.edge.source) <= std::pair(q.plane, q.edge.source));
    }
  }
}

TEST_CASE("itemized causes name every failed check") {
  VectorFieldSpec s = build_explicit(3, 0.01);
  std::swap(s.planes[1], s.planes[2]);  // break connections and signs at once
  DNNGraph g = build_graph(3);
  RealizationReport rep = verify_realization(s, g, VerifyParams{});
  CHECK(!rep.overall);
  CHECK(!rep.causes.empty());
  bool has_sign_cause = false, has_connection_cause = false;
  for (const std::string& c : rep.causes) {
    if (c.rfind("sign pattern:", 0) == 0) has_sign_cause = true;
    if (c.rfind("connection", 0) == 0) has_connection_cause = true;
  }
  CHECK(has_sign_cause);
  CHECK(has_connection_cause);
}

TEST_CASE("report serializes with all sections") {
  VectorFieldSpec s = build_explicit(3, 0.01);
  DNNGraph g = build_graph(3);
  RealizationReport rep = verify_realization(s, g, VerifyParams{});
  nlohmann::json j = to_json(rep);
  CHECK(j["overall"] == true);
  CHECK(j["connections"].size() == 6);
  CHECK(j["axis"]["count"] == 5);
  CHECK(j["sign_patterns"]["ok"] == true);
  CHECK(j["params"]["eta"] == 1e-2);
  CHECK(j["absences"].is_array());
}

TEST_CASE("analytic jacobian matches central differences at seeded probes") {
  for (int n : {3, 6}) {
    VectorFieldSpec s = build_explicit(n, 0.01);
    CHECK(jacobian_fd_max_error(s, 100, 20260819ull) < 1e-6);
  }
  // the probe stream is reproducible and seed-dependent
  VectorFieldSpec s = build_explicit(4, 0.01);
  CHECK(jacobian_fd_max_error(s, 50, 7ull) == jacobian_fd_max_error(s, 50, 7ull));
  CHECK(jacobian_fd_max_error(s, 50, 7ull) != jacobian_fd_max_error(s, 50, 8ull));
  CHECK_THROWS_AS((void)jacobian_fd_max_error(s, 0, 1ull), std::invalid_argument);
}

}  // TEST_SUITE
