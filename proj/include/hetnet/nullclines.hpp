// Nullcline geometry inside a single invariant plane (x, y_j): each factor of
// f_j contributes one x-nullcline curve and each factor of g_j one y-nullcline
// curve. Reference mode samples the exact conic/parabola shapes (the epsilon=0
// geometry); actual mode projects x-curve points onto the true xdot = 0 set of
// the field with its epsilon. The coordinate axis y = 0 never appears as a
// curve: it is not a factor, and for epsilon > 0 it is not a nullcline at all.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "hetnet/construct.hpp"

namespace hetnet {

enum class NullclineMode {
  EpsZero,    // analytic parameterization of each factor's zero set
  EpsActual,  // x-curve points Newton-polished onto xdot = 0 at fixed y
};

struct NullclineCurve {
  int plane = 0;
  std::string which;     // "x-nullcline" (factor of f) or "y-nullcline" (factor of g)
  std::string id;        // "f<i>" / "g<i>", 1-based factor position
  int factor_index = 0;  // 1-based index into the plane's f or g factor list
  FactorTerm factor;     // the defining factor
  std::vector<std::array<double, 2>> points;  // polyline in (x, y_j)
  std::vector<double> axis_intersections;     // reference-geometry x-axis crossings, ascending
  bool complete = true;  // false when polish dropped points
};

// Sample every factor curve of the plane. samples_per_curve must be >= 16.
std::vector<NullclineCurve> sample_nullclines(const VectorFieldSpec& spec, int plane,
                                              int samples_per_curve, NullclineMode mode);

// Sign of the transverse field component at a point of the curve: ydot_j on an
// x-nullcline, xdot on a y-nullcline. Returns +1 or -1; returns 0 when the
// component magnitude is below 1e-10 (degenerate crossing).
int crossing_direction(const VectorFieldSpec& spec, const NullclineCurve& curve, double x,
                       double y);

// CSV rows: plane,curve-id,which,x,y (17 significant digits).
std::string nullclines_csv(const std::vector<NullclineCurve>& curves);

// Self-contained SVG drawing of one plane: solid curves for x-nullclines,
// dashed for y-nullclines, node dots at the odd integers. Assembled textually.
std::string nullclines_svg(const VectorFieldSpec& spec, const std::vector<NullclineCurve>& curves,
                           int plane);

}  // namespace hetnet
