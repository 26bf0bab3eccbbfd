#include <cmath>
#include <cstring>
#include <string>

#include <doctest.h>

#include "hetnet/construct.hpp"
#include "hetnet/integrate.hpp"

using namespace hetnet;

namespace {

std::vector<double> node_state(const VectorFieldSpec& s, int node) {
  std::vector<double> u(static_cast<std::size_t>(s.dim()), 0.0);
  u[0] = 2.0 * node - 1.0;
  return u;
}

BallEvent node_ball(const VectorFieldSpec& s, int node, double r) {
  return BallEvent{node_state(s, node), r};
}

// start state for the connection source -> target: source node nudged into
// the plane that carries the target
std::vector<double> connection_start(const VectorFieldSpec& s, int source, int plane,
                                     double delta) {
  std::vector<double> u = node_state(s, source);
  u[static_cast<std::size_t>(plane)] = delta;
  return u;
}

}  // namespace

TEST_SUITE("integrate") {

TEST_CASE("stop reason names") {
  CHECK(std::strcmp(stop_reason_name(StopReason::ReachedBall), "entered-ball") == 0);
  CHECK(std::strcmp(stop_reason_name(StopReason::LeftDomain), "left-domain") == 0);
  CHECK(std::strcmp(stop_reason_name(StopReason::ReachedTMax), "t-max-reached") == 0);
  CHECK(std::strcmp(stop_reason_name(StopReason::StepUnderflow), "step-underflow") == 0);
  CHECK(std::strcmp(stop_reason_name(StopReason::StepBudget), "step-budget-exhausted") == 0);
}

TEST_CASE("connection run reaches the target ball with boundary accuracy") {
  VectorFieldSpec s = build_explicit(4, 0.01);
  IntegratorOptions opt;
  opt.balls = {node_ball(s, 2, 1e-2)};
  IntegrationResult res = integrate(s, connection_start(s, 1, 2, 1e-3), opt);
  REQUIRE(res.reason == StopReason::ReachedBall);
  CHECK(res.ball_index == 0);
  CHECK(res.t_end > 0.0);
  // the event point sits on the ball boundary to the bisection accuracy
  double d2 = 0.0;
  for (std::size_t i = 0; i < res.u_end.size(); ++i) {
    const double diff = res.u_end[i] - opt.balls[0].center[i];
    d2 += diff * diff;
  }
  CHECK(std::sqrt(d2) <= 1e-2);
  CHECK(std::sqrt(d2) >= 1e-2 - 1e-8);
}

TEST_CASE("runs are deterministic") {
  VectorFieldSpec s = build_explicit(3, 0.01);
  IntegratorOptions opt;
  opt.balls = {node_ball(s, 2, 1e-2)};
  std::vector<double> u0 = connection_start(s, 1, 2, 1e-3);
  IntegrationResult a = integrate(s, u0, opt);
  IntegrationResult b = integrate(s, u0, opt);
  CHECK(a.t_end == b.t_end);
  CHECK(a.nfev == b.nfev);
  CHECK(a.u_end == b.u_end);
}

TEST_CASE("initially-zero coordinates stay exactly zero") {
  VectorFieldSpec s = build_explicit(5, 0.01);
  IntegratorOptions opt;
  opt.t_max = 30.0;
  opt.h_max = 1e-3;  // force many steps
  IntegrationResult res = integrate(s, connection_start(s, 1, 2, 1e-3), opt);
  CHECK(res.accepted >= 10000);
  // planes 1, 3, 4, 5 started at zero; drift must be exactly zero
  CHECK(res.max_abs[1] == 0.0);
  CHECK(res.max_abs[3] == 0.0);
  CHECK(res.max_abs[4] == 0.0);
  CHECK(res.max_abs[5] == 0.0);
  CHECK(res.max_abs[2] > 0.0);
}

TEST_CASE("t_max is reached when no event is armed") {
  VectorFieldSpec s = build_explicit(3, 0.01);
  IntegratorOptions opt;
  opt.t_max = 2.0;
  IntegrationResult res = integrate(s, connection_start(s, 1, 2, 1e-3), opt);
  CHECK(res.reason == StopReason::ReachedTMax);
  CHECK(res.t_end == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("start inside a ball fires the event at t = 0") {
  VectorFieldSpec s = build_explicit(3, 0.01);
  IntegratorOptions opt;
  opt.balls = {node_ball(s, 1, 1e-2)};
  IntegrationResult res = integrate(s, connection_start(s, 1, 2, 1e-3), opt);
  CHECK(res.reason == StopReason::ReachedBall);
  CHECK(res.t_end == 0.0);
  CHECK(res.accepted == 0);
}

TEST_CASE("step budget cuts the run deterministically") {
  VectorFieldSpec s = build_explicit(3, 0.01);
  IntegratorOptions opt;
  opt.balls = {node_ball(s, 2, 1e-2)};
  opt.max_steps = 50;
  IntegrationResult res = integrate(s, connection_start(s, 1, 2, 1e-3), opt);
  CHECK(res.reason == StopReason::StepBudget);
  CHECK(res.accepted + res.rejected == 50);
  CHECK(res.t_end < 20.0);
  IntegrationResult res2 = integrate(s, connection_start(s, 1, 2, 1e-3), opt);
  CHECK(res2.t_end == res.t_end);
}

TEST_CASE("reverse time from a mid-connection point returns to the source") {
  VectorFieldSpec s = build_explicit(3, 0.01);
  // forward: record the trajectory of connection 1 -> 2
  IntegratorOptions fwd;
  fwd.balls = {node_ball(s, 2, 1e-2)};
  fwd.record = true;
  fwd.record_stride = 50;
  IntegrationResult f = integrate(s, connection_start(s, 1, 2, 1e-3), fwd);
  REQUIRE(f.reason == StopReason::ReachedBall);
  REQUIRE(f.u_samples.size() >= 3);
  // pick a mid-flight sample and integrate backwards toward the source ball
  const std::vector<double>& mid = f.u_samples[f.u_samples.size() / 2];
  IntegratorOptions bwd;
  bwd.direction = -1;
  bwd.t_max = 100.0;
  bwd.balls = {node_ball(s, 1, 1e-2)};
  bwd.enforce_domain = false;  // reverse flow is expanding; skip the box check
  IntegrationResult b = integrate(s, mid, bwd);
  CHECK(b.reason == StopReason::ReachedBall);
}

TEST_CASE("reverse time exits the forward-invariant domain box") {
  VectorFieldSpec s = build_explicit(3, 0.01);
  IntegratorOptions opt;
  opt.direction = -1;
  opt.t_max = 1e3;
  std::vector<double> u0(static_cast<std::size_t>(s.dim()), 0.0);
  u0[0] = 4.3;  // forward flow contracts strongly here, so reverse flow blows up
  u0[2] = 3.5;
  IntegrationResult res = integrate(s, u0, opt);
  CHECK(res.reason == StopReason::LeftDomain);
}

TEST_CASE("closest-approach tracking brackets the miss distance") {
  VectorFieldSpec s = build_explicit(4, 0.01);
  IntegratorOptions opt;
  opt.balls = {node_ball(s, 2, 1e-2)};
  opt.track_center = node_state(s, 2);
  IntegrationResult res = integrate(s, connection_start(s, 1, 2, 1e-3), opt);
  REQUIRE(res.reason == StopReason::ReachedBall);
  CHECK(res.min_track_distance <= 1e-2);
  CHECK(res.min_track_distance > 0.0);
}

TEST_CASE("halving the tolerances preserves the terminal event") {
  VectorFieldSpec s = build_explicit(4, 0.01);
  struct Probe { int source, plane, target; };
  for (const Probe& p : {Probe{1, 2, 2}, Probe{2, 3, 3}, Probe{4, 1, 1}}) {
    IntegratorOptions opt;
    opt.balls = {node_ball(s, p.target, 1e-2)};
    IntegrationResult r1 = integrate(s, connection_start(s, p.source, p.plane, 1e-3), opt);
    opt.rel_tol /= 2.0;
    opt.abs_tol /= 2.0;
    IntegrationResult r2 = integrate(s, connection_start(s, p.source, p.plane, 1e-3), opt);
    CHECK(r1.reason == r2.reason);
    CHECK(r1.ball_index == r2.ball_index);
    CHECK(r1.t_end == doctest::Approx(r2.t_end).epsilon(1e-6));
  }
}

TEST_CASE("input validation") {
  VectorFieldSpec s = build_explicit(3, 0.01);
  std::vector<double> u0 = connection_start(s, 1, 2, 1e-3);
  IntegratorOptions opt;
  opt.rel_tol = 0.5;  // above the supported band
  CHECK_THROWS_AS((void)integrate(s, u0, opt), std::invalid_argument);
  opt = {};
  opt.t_max = -1.0;
  CHECK_THROWS_AS((void)integrate(s, u0, opt), std::invalid_argument);
  opt = {};
  opt.direction = 2;
  CHECK_THROWS_AS((void)integrate(s, u0, opt), std::invalid_argument);
  opt = {};
  opt.balls = {BallEvent{{1.0, 0.0}, 1e-2}};  // wrong dimension
  CHECK_THROWS_AS((void)integrate(s, u0, opt), std::invalid_argument);
  opt = {};
  opt.track_center = {1.0};  // wrong dimension
  CHECK_THROWS_AS((void)integrate(s, u0, opt), std::invalid_argument);
  CHECK_THROWS_AS((void)integrate(s, {1.0, 0.0}, IntegratorOptions{}), std::invalid_argument);
}

TEST_CASE("recorded trajectory exports as csv") {
  VectorFieldSpec s = build_explicit(3, 0.01);
  IntegratorOptions opt;
  opt.t_max = 1.0;
  opt.record = true;
  opt.record_stride = 10;
  IntegrationResult res = integrate(s, connection_start(s, 1, 2, 1e-3), opt);
  REQUIRE(!res.t_samples.empty());
  CHECK(res.t_samples.size() == res.u_samples.size());
  std::string csv = trajectory_csv(res, s.dim());
  CHECK(csv.rfind("t,x,y1,y2,y3", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') ==
        static_cast<long>(res.t_samples.size()) + 1);
}

}  // TEST_SUITE
