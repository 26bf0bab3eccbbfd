#include "hetnet/nullclines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "hetnet/dynamics.hpp"
#include "hetnet/io_util.hpp"

namespace hetnet {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> axis_intersections_of(const FactorTerm& factor) {
  switch (factor.kind) {
    case FactorKind::ParabolaRight:
    case FactorKind::ParabolaLeft:
      return {factor.anchor};
    case FactorKind::CircleRightCentered:
      return {factor.anchor, factor.anchor + 1.0};
    case FactorKind::CircleLeftCentered:
      return {factor.anchor - 1.0, factor.anchor};
    case FactorKind::WideEllipse: {
      const double half = std::sqrt(factor.b);
      return {factor.anchor - half, factor.anchor + half};
    }
    case FactorKind::AxisProduct:
      break;
  }
  throw std::invalid_argument("axis factor cannot form a nullcline curve");
}

// Analytic parameterization of the factor's zero set (upper half-plane arc),
// clipped to x in [0, x_hi] and y in [0, 2].
std::vector<std::array<double, 2>> reference_points(const FactorTerm& factor, int samples,
                                                    double x_hi) {
  std::vector<std::array<double, 2>> pts;
  pts.reserve(static_cast<std::size_t>(samples));
  const double y_cap = 2.0;
  switch (factor.kind) {
    case FactorKind::ParabolaRight: {  // x = anchor + y^2, opens rightward
      const double reach = x_hi - factor.anchor;
      if (reach <= 0.0) return pts;
      const double y_max = std::min(y_cap, std::sqrt(reach));
      for (int i = 0; i < samples; ++i) {
        const double y = y_max * static_cast<double>(i) / (samples - 1);
        pts.push_back({factor.anchor + y * y, y});
      }
      return pts;
    }
    case FactorKind::ParabolaLeft: {  // x = anchor - y^2, opens leftward
      const double reach = factor.anchor - 0.0;
      if (reach <= 0.0) return pts;
      const double y_max = std::min(y_cap, std::sqrt(reach));
      for (int i = 0; i < samples; ++i) {
        const double y = y_max * static_cast<double>(i) / (samples - 1);
        pts.push_back({factor.anchor - y * y, y});
      }
      return pts;
    }
    case FactorKind::CircleRightCentered:
    case FactorKind::CircleLeftCentered: {
      const double cx = factor.kind == FactorKind::CircleRightCentered ? factor.anchor + 0.5
                                                                       : factor.anchor - 0.5;
      for (int i = 0; i < samples; ++i) {
        const double th = kPi * static_cast<double>(i) / (samples - 1);
        pts.push_back({cx + 0.5 * std::cos(th), 0.5 * std::sin(th)});
      }
      return pts;
    }
    case FactorKind::WideEllipse: {  // a*y^2 + (x - c)^2 = b
      const double rx = std::sqrt(factor.b);
      const double ry = std::sqrt(factor.b / factor.a);
      for (int i = 0; i < samples; ++i) {
        const double th = kPi * static_cast<double>(i) / (samples - 1);
        pts.push_back({factor.anchor + rx * std::cos(th), ry * std::sin(th)});
      }
      return pts;
    }
    case FactorKind::AxisProduct:
      break;
  }
  throw std::invalid_argument("axis factor cannot form a nullcline curve");
}

// In-plane xdot at fixed y (all other planes at y = 0).
double plane_xdot(const VectorFieldSpec& spec, int plane, double x, double y) {
  const PlaneComponent& comp = spec.planes[static_cast<std::size_t>(plane - 1)];
  return -spec.epsilon * spec.axis.value(x, 0.0) + y * eval_product(comp.f, x, y).value;
}

double plane_xdot_dx(const VectorFieldSpec& spec, int plane, double x, double y) {
  const PlaneComponent& comp = spec.planes[static_cast<std::size_t>(plane - 1)];
  return -spec.epsilon * spec.axis.ddx(x, 0.0) + y * eval_product(comp.f, x, y).ddx;
}

// Newton in x at fixed y, seeded on the reference curve. Returns false when
// the iteration diverges, leaves the domain, or lands on a distant branch.
bool polish_x(const VectorFieldSpec& spec, int plane, double y, double& x, double x_hi) {
  const double seed = x;
  for (int it = 0; it < 60; ++it) {
    const double fx = plane_xdot(spec, plane, x, y);
    const double dfx = plane_xdot_dx(spec, plane, x, y);
    if (!std::isfinite(fx) || !std::isfinite(dfx) || dfx == 0.0) return false;
    const double step = fx / dfx;
    x -= step;
    if (!std::isfinite(x) || std::abs(x - seed) > 0.5) return false;
    if (std::abs(step) <= 1e-13 * (1.0 + std::abs(x))) break;
    if (it == 59) return false;
  }
  return x >= 0.0 && x <= x_hi;
}

}  // namespace

std::vector<NullclineCurve> sample_nullclines(const VectorFieldSpec& spec, int plane,
                                              int samples_per_curve, NullclineMode mode) {
  if (plane < 1 || plane > static_cast<int>(spec.planes.size()))
    throw std::invalid_argument("plane index out of range");
  if (samples_per_curve < 16) throw std::invalid_argument("samples_per_curve must be >= 16");

  const PlaneComponent& comp = spec.planes[static_cast<std::size_t>(plane - 1)];
  const double x_hi = spec.domain_x_max();
  std::vector<NullclineCurve> curves;
  curves.reserve(comp.f.size() + comp.g.size());

  auto emit = [&](const FactorTerm& factor, int index, bool is_x_curve) {
    NullclineCurve curve;
    curve.plane = plane;
    curve.which = is_x_curve ? "x-nullcline" : "y-nullcline";
    curve.id = (is_x_curve ? "f" : "g") + std::to_string(index);
    curve.factor_index = index;
    curve.factor = factor;
    curve.axis_intersections = axis_intersections_of(factor);
    curve.points = reference_points(factor, samples_per_curve, x_hi);
    if (is_x_curve && mode == NullclineMode::EpsActual) {
      // project onto the true xdot = 0 set; the y-curves need no projection
      // because ydot = sigma * y * g carries no epsilon term
      std::vector<std::array<double, 2>> kept;
      kept.reserve(curve.points.size());
      for (const std::array<double, 2>& p : curve.points) {
        double x = p[0];
        if (polish_x(spec, plane, p[1], x, x_hi))
          kept.push_back({x, p[1]});
        else
          curve.complete = false;
      }
      curve.points = std::move(kept);
    }
    curves.push_back(std::move(curve));
  };

  for (std::size_t i = 0; i < comp.f.size(); ++i)
    emit(comp.f[i], static_cast<int>(i) + 1, true);
  for (std::size_t i = 0; i < comp.g.size(); ++i)
    emit(comp.g[i], static_cast<int>(i) + 1, false);
  return curves;
}

int crossing_direction(const VectorFieldSpec& spec, const NullclineCurve& curve, double x,
                       double y) {
  std::vector<double> u(static_cast<std::size_t>(spec.dim()), 0.0);
  u[0] = x;
  u[static_cast<std::size_t>(curve.plane)] = y;
  const std::vector<double> du = eval_field(spec, u);
  const double comp = curve.which == "x-nullcline" ? du[static_cast<std::size_t>(curve.plane)]
                                                   : du[0];
  if (std::abs(comp) < 1e-10) return 0;  // degenerate crossing
  return comp > 0.0 ? 1 : -1;
}

std::string nullclines_csv(const std::vector<NullclineCurve>& curves) {
  std::string out = "plane,curve-id,which,x,y\n";
  for (const NullclineCurve& c : curves)
    for (const std::array<double, 2>& p : c.points) {
      out += std::to_string(c.plane);
      out += ',';
      out += c.id;
      out += ',';
      out += c.which;
      out += ',';
      out += format17(p[0]);
      out += ',';
      out += format17(p[1]);
      out += '\n';
    }
  return out;
}

std::string nullclines_svg(const VectorFieldSpec& spec, const std::vector<NullclineCurve>& curves,
                           int plane) {
  // window [x0, x1] x [0, y1] in plane coordinates, y axis pointing up
  const double x0 = -0.5, x1 = spec.domain_x_max() + 0.5, y1 = 2.2;
  const double scale = 90.0;
  const int width = static_cast<int>((x1 - x0) * scale);
  const int height = static_cast<int>(y1 * scale);
  auto px = [&](double x) { return (x - x0) * scale; };
  auto py = [&](double y) { return (y1 - y) * scale; };

  char buf[256];
  std::string svg;
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                "viewBox=\"0 0 %d %d\">\n",
                width, height, width, height);
  svg += buf;
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // coordinate axis
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#888\" "
                "stroke-width=\"1\"/>\n",
                px(x0), py(0.0), px(x1), py(0.0));
  svg += buf;

  for (const NullclineCurve& c : curves) {
    if (c.plane != plane || c.points.empty()) continue;
    const bool is_x = c.which == "x-nullcline";
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += is_x ? "#1f4e9c" : "#c23b22";  // solid blue x-curves, dashed red y-curves
    svg += "\" stroke-width=\"2\"";
    if (!is_x) svg += " stroke-dasharray=\"7,5\"";
    svg += " points=\"";
    for (const std::array<double, 2>& p : c.points) {
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(p[0]), py(p[1]));
      svg += buf;
    }
    svg += "\"/>\n";
  }

  // nodes at the odd integers
  for (int k = 1; k <= spec.n; ++k) {
    std::snprintf(buf, sizeof(buf),
                  "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"4\" fill=\"black\"/>\n",
                  px(2.0 * k - 1.0), py(0.0));
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"13\" text-anchor=\"middle\" "
                  "fill=\"#333\">%d</text>\n",
                  px(2.0 * k - 1.0), py(0.0) + 18.0, 2 * k - 1);
    svg += buf;
  }
  std::snprintf(buf, sizeof(buf),
                "<text x=\"8\" y=\"18\" font-size=\"14\" fill=\"#333\">plane %d</text>\n", plane);
  svg += buf;
  svg += "</svg>\n";
  return svg;
}

}  // namespace hetnet
