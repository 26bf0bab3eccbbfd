#include "hetnet/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hetnet/dynamics.hpp"
#include "hetnet/io_util.hpp"

namespace hetnet {

namespace {

// Dormand-Prince 4(5) tableau (7 stages, first-same-as-last).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// difference between the 5th- and embedded 4th-order weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kAlpha = 0.2 - 0.75 * kBeta;
constexpr double kMinH = 1e-14;

struct Stepper {
  const VectorFieldSpec& spec;
  int dim;
  double dir;
  const std::vector<int>& pinned;
  long long nfev = 0;

  std::vector<double> k1, k2, k3, k4, k5, k6, k7, tmp;

  Stepper(const VectorFieldSpec& s, double direction, const std::vector<int>& pins)
      : spec(s), dim(s.dim()), dir(direction), pinned(pins) {
    for (auto* v : {&k1, &k2, &k3, &k4, &k5, &k6, &k7, &tmp})
      v->assign(static_cast<std::size_t>(dim), 0.0);
  }

  void rhs(const double* u, double* du) {
    eval_field_into(spec, u, du);
    if (dir < 0)
      for (int i = 0; i < dim; ++i) du[i] = -du[i];
    ++nfev;
  }

  void pin(double* u) const {
    for (int j : pinned) u[j] = 0.0;
  }

  // One trial step of size h from u (k1 must hold rhs(u)). Fills u_new and
  // the raw error vector err = u5 - u4. k7 holds rhs(u_new) afterwards.
  void trial(const double* u, double h, double* u_new, double* err) {
    for (int i = 0; i < dim; ++i) tmp[i] = u[i] + h * a21 * k1[i];
    pin(tmp.data());
    rhs(tmp.data(), k2.data());
    for (int i = 0; i < dim; ++i) tmp[i] = u[i] + h * (a31 * k1[i] + a32 * k2[i]);
    pin(tmp.data());
    rhs(tmp.data(), k3.data());
    for (int i = 0; i < dim; ++i) tmp[i] = u[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    pin(tmp.data());
    rhs(tmp.data(), k4.data());
    for (int i = 0; i < dim; ++i)
      tmp[i] = u[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    pin(tmp.data());
    rhs(tmp.data(), k5.data());
    for (int i = 0; i < dim; ++i)
      tmp[i] = u[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    pin(tmp.data());
    rhs(tmp.data(), k6.data());
    for (int i = 0; i < dim; ++i)
      u_new[i] = u[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    pin(u_new);
    rhs(u_new, k7.data());
    for (int i = 0; i < dim; ++i)
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
  }
};

double error_norm(const std::vector<double>& err, const double* u_old, const double* u_new,
                  int dim, double rel, double abs) {
  double sum = 0.0;
  for (int i = 0; i < dim; ++i) {
    double scale = abs + rel * std::max(std::abs(u_old[i]), std::abs(u_new[i]));
    double q = err[i] / scale;
    sum += q * q;
  }
  double norm = std::sqrt(sum / dim);
  if (!std::isfinite(norm)) return std::numeric_limits<double>::infinity();
  return norm;
}

double dist2(const std::vector<double>& u, const std::vector<double>& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double d = u[i] - c[i];
    s += d * d;
  }
  return s;
}

}  // namespace

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::ReachedBall: return "entered-ball";
    case StopReason::LeftDomain: return "left-domain";
    case StopReason::ReachedTMax: return "t-max-reached";
    case StopReason::StepUnderflow: return "step-underflow";
    case StopReason::StepBudget: return "step-budget-exhausted";
  }
  return "unknown";
}

IntegrationResult integrate(const VectorFieldSpec& spec, const std::vector<double>& u0,
                            const IntegratorOptions& opt) {
  int dim = spec.dim();
  if (static_cast<int>(u0.size()) != dim)
    throw std::invalid_argument("initial state size does not match field dimension");
  if (!(opt.rel_tol > 0.0 && opt.rel_tol <= 1e-2) || !(opt.abs_tol > 0.0 && opt.abs_tol <= 1e-2))
    throw std::invalid_argument("tolerances must lie in (0, 1e-2]");
  if (opt.direction != 1 && opt.direction != -1)
    throw std::invalid_argument("direction must be +1 or -1");
  if (!(opt.t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
  for (const BallEvent& b : opt.balls)
    if (static_cast<int>(b.center.size()) != dim || !(b.radius > 0.0))
      throw std::invalid_argument("ball event has wrong dimension or non-positive radius");

  std::vector<int> pinned;
  for (int j = 1; j < dim; ++j)
    if (u0[j] == 0.0) pinned.push_back(j);

  Stepper st(spec, opt.direction, pinned);

  IntegrationResult res;
  res.u_end = u0;
  res.max_abs.assign(static_cast<std::size_t>(dim), 0.0);

  std::vector<double> u = u0, u_new(dim), err(dim), u_event(dim);
  double t = 0.0;
  double h = std::min({opt.h_init, opt.h_max, opt.t_max});
  double err_old = 1e-4;

  const double x_lo = -1.0, x_hi = spec.domain_x_max() + 1.0, y_hi = 4.0;

  const bool tracking = !opt.track_center.empty();
  if (tracking && static_cast<int>(opt.track_center.size()) != dim)
    throw std::invalid_argument("track_center size does not match field dimension");
  auto track = [&](const std::vector<double>& v) {
    for (int i = 0; i < dim; ++i) res.max_abs[i] = std::max(res.max_abs[i], std::abs(v[i]));
    if (tracking)
      res.min_track_distance =
          std::min(res.min_track_distance, std::sqrt(dist2(v, opt.track_center)));
  };
  track(u);
  if (opt.record) {
    res.t_samples.push_back(0.0);
    res.u_samples.push_back(u);
  }

  // a ball already containing the start point fires immediately
  for (std::size_t b = 0; b < opt.balls.size(); ++b)
    if (dist2(u, opt.balls[b].center) <= opt.balls[b].radius * opt.balls[b].radius) {
      res.reason = StopReason::ReachedBall;
      res.ball_index = static_cast<int>(b);
      res.t_end = 0.0;
      res.nfev = st.nfev;
      return res;
    }

  st.rhs(u.data(), st.k1.data());

  long long accepted_since_record = 0;
  while (true) {
    if (opt.t_max - t <= 1e-12) {
      res.reason = StopReason::ReachedTMax;
      break;
    }
    if (opt.max_steps > 0 && res.accepted + res.rejected >= opt.max_steps) {
      res.reason = StopReason::StepBudget;
      break;
    }
    h = std::min({h, opt.h_max, opt.t_max - t});
    if (h < kMinH) {
      res.reason = StopReason::StepUnderflow;
      break;
    }

    st.trial(u.data(), h, u_new.data(), err.data());
    double en = error_norm(err, u.data(), u_new.data(), dim, opt.rel_tol, opt.abs_tol);

    if (en > 1.0) {
      ++res.rejected;
      if (std::isfinite(en)) {
        double growth = std::max(0.2, kSafety * std::pow(en, -0.2));
        h *= std::min(growth, 1.0);
      } else {
        h *= 0.5;  // NaN/overflow inside the trial step
      }
      continue;
    }

    // accepted
    ++res.accepted;
    double t_new = t + h;

    // event check: entered any ball during this step?
    int hit = -1;
    double h_hit = h;
    for (std::size_t b = 0; b < opt.balls.size(); ++b) {
      const BallEvent& ball = opt.balls[b];
      double r2 = ball.radius * ball.radius;
      if (dist2(u_new, ball.center) > r2) continue;
      // bisect the step size until the entry point sits on the sphere to 1e-9
      double lo = 0.0, hi2 = h;
      std::vector<double> utry(dim), edum(dim);
      for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi2);
        st.trial(u.data(), mid, utry.data(), edum.data());
        double d = std::sqrt(dist2(utry, ball.center)) - ball.radius;
        if (d > 0.0)
          lo = mid;
        else
          hi2 = mid;
        if (std::abs(d) <= 1e-9 && d <= 0.0) break;
      }
      if (hi2 < h_hit) {
        h_hit = hi2;
        hit = static_cast<int>(b);
      }
    }
    if (hit >= 0) {
      st.trial(u.data(), h_hit, u_event.data(), err.data());
      track(u_event);
      res.reason = StopReason::ReachedBall;
      res.ball_index = hit;
      res.u_end = u_event;
      res.t_end = t + h_hit;
      if (opt.record) {
        res.t_samples.push_back(res.t_end);
        res.u_samples.push_back(u_event);
      }
      res.nfev = st.nfev;
      return res;
    }

    track(u_new);
    u.swap(u_new);
    t = t_new;
    st.k1.swap(st.k7);  // FSAL
    if (opt.record && ++accepted_since_record >= opt.record_stride) {
      accepted_since_record = 0;
      res.t_samples.push_back(t);
      res.u_samples.push_back(u);
    }

    if (opt.enforce_domain) {
      bool out = u[0] < x_lo || u[0] > x_hi;
      for (int j = 1; j < dim && !out; ++j)
        if (u[j] < -opt.abs_tol || u[j] > y_hi) out = true;
      if (out) {
        res.reason = StopReason::LeftDomain;
        break;
      }
    }

    double growth = kSafety * std::pow(en > 0.0 ? en : 1e-10, -kAlpha) * std::pow(err_old, kBeta);
    h *= std::clamp(growth, 0.2, 5.0);
    err_old = std::max(en, 1e-4);
  }

  res.u_end = u;
  res.t_end = t;
  res.nfev = st.nfev;
  if (opt.record && (res.t_samples.empty() || res.t_samples.back() != t)) {
    res.t_samples.push_back(t);
    res.u_samples.push_back(u);
  }
  return res;
}

std::string trajectory_csv(const IntegrationResult& res, int dim) {
  std::string s = "t,x";
  for (int j = 1; j < dim; ++j) s += ",y" + std::to_string(j);
  s += "\n";
  for (std::size_t i = 0; i < res.t_samples.size(); ++i) {
    s += format17(res.t_samples[i]);
    for (double v : res.u_samples[i]) s += "," + format17(v);
    s += "\n";
  }
  return s;
}

}  // namespace hetnet
