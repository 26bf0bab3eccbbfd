// Adaptive explicit Runge-Kutta integration (Dormand-Prince 4(5), FSAL) with
// PI step-size control, ball-entry event location, a domain box, and exact
// pinning of coordinates that start at zero.
#pragma once

#include <limits>
#include <string>
#include <vector>

#include "hetnet/construct.hpp"

namespace hetnet {

struct BallEvent {
  std::vector<double> center;
  double radius = 0.0;
};

enum class StopReason {
  ReachedBall,    // entered one of the requested balls
  LeftDomain,     // exited the domain box
  ReachedTMax,    // integrated to t_max without any event
  StepUnderflow,  // step control drove h below 1e-14
  StepBudget,     // opt-in max_steps budget exhausted before any other stop
};

const char* stop_reason_name(StopReason r);

struct IntegratorOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double t_max = 1e4;
  double h_init = 1e-6;
  double h_max = std::numeric_limits<double>::infinity();
  int direction = 1;  // +1 forward time, -1 reverse time
  bool enforce_domain = true;
  std::vector<BallEvent> balls;
  bool record = false;   // keep accepted-step samples
  int record_stride = 1; // when recording, keep every k-th accepted step
  std::vector<double> track_center;  // when non-empty: track closest approach to this point
  // Deterministic work bound: stop with StepBudget once accepted + rejected
  // trial steps reach this count (0 = unlimited). Lets callers impose wall
  // deadlines without making results time-dependent.
  long long max_steps = 0;
};

struct IntegrationResult {
  StopReason reason = StopReason::ReachedTMax;
  int ball_index = -1;   // which ball was entered, when reason == ReachedBall
  double t_end = 0.0;    // elapsed integration time
  std::vector<double> u_end;
  long long accepted = 0;
  long long rejected = 0;
  long long nfev = 0;
  std::vector<double> max_abs;  // per-coordinate max |u_i| seen over the run
  double min_track_distance = std::numeric_limits<double>::infinity();
  std::vector<double> t_samples;
  std::vector<std::vector<double>> u_samples;
};

// Integrate du/dt = direction * field(u) from u0 until an event, domain exit,
// t_max, or step underflow. Coordinates j >= 1 with u0[j] == 0 are pinned to
// exactly zero for the whole run. Throws std::invalid_argument on bad
// tolerances (must lie in (0, 1e-2]) or mismatched sizes.
IntegrationResult integrate(const VectorFieldSpec& spec, const std::vector<double>& u0,
                            const IntegratorOptions& opt);

// CSV dump of recorded samples: t,x,y1,...,yd rows, 17 significant digits.
std::string trajectory_csv(const IntegrationResult& res, int dim);

}  // namespace hetnet
