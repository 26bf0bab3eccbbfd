#pragma once
// Factored polynomial vector fields on R^dim (dim <= 6) whose flow realises a
// double-next-neighbour digraph as a heteroclinic network:
//
//   x'   = -epsilon * prod_{k=1}^{2n-1} (x - k)  +  sum_j y_j * f_j(x, y_j)
//   y_j' = sigma_j * y_j * g_j(x, y_j)
//
// Nodes sit at xi_k = (2k-1, 0, ..., 0).  Every f_j, g_j is kept as a list of
// conic/parabola factors and always evaluated in factored form.

#include <array>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hetnet {

// Raised for failures of numerical procedures (calibration, root finding,
// hyperbolicity checks) as opposed to malformed input.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

enum class FactorKind {
  ParabolaRight,        //  y^2 - x + anchor       (opens right, axis crossing at anchor)
  ParabolaLeft,         // -y^2 - x + anchor       (opens left, axis crossing at anchor)
  CircleRightCentered,  //  y^2 + (x-(anchor+1/2))^2 - 1/4   (axis points anchor, anchor+1)
  CircleLeftCentered,   //  y^2 + (x-(anchor-1/2))^2 - 1/4   (axis points anchor-1, anchor)
  WideEllipse,          //  a*y^2 + (x-anchor)^2 - b         (anchor is the center)
  AxisProduct,          //  prod_{k in axis_roots} (x - k)
};

const char* factor_kind_name(FactorKind k);
FactorKind factor_kind_from_name(const std::string& name);

struct FactorTerm {
  FactorKind kind = FactorKind::ParabolaLeft;
  double anchor = 0.0;          // axis crossing (parabolas, circles) or center (wide ellipse)
  double a = 0.0, b = 0.0;      // wide-ellipse coefficients
  std::vector<int> axis_roots;  // AxisProduct only, ascending

  double value(double x, double y) const;
  double ddx(double x, double y) const;
  double ddy(double x, double y) const;

  bool operator==(const FactorTerm&) const = default;
};

// Value and both partials of prod(factors) at (x, y), accumulated with the
// product rule in a single pass (d <- d*v_i + p*d_i, p <- p*v_i).
struct ProductEval {
  double value = 1.0;
  double ddx = 0.0;
  double ddy = 0.0;
};
ProductEval eval_product(const std::vector<FactorTerm>& factors, double x, double y);

struct PlaneComponent {
  double sigma = 1.0;         // sign of the y_j equation; plane 1 carries -1
  std::vector<FactorTerm> f;  // contributes y_j * prod(f) to x'
  std::vector<FactorTerm> g;  // y_j' = sigma * y_j * prod(g)
};

struct VectorFieldSpec {
  int n = 0;
  std::string mode;  // "explicit" | "general"
  double epsilon = 0.0;
  FactorTerm axis;                     // AxisProduct over 1..2n-1
  std::vector<PlaneComponent> planes;  // planes[j-1] is the y_j component

  int dim() const { return 1 + static_cast<int>(planes.size()); }
  std::vector<double> node_positions() const;  // 2k-1 for k = 1..n
  double domain_x_max() const { return 2.0 * n; }
};

// Index bookkeeping for the general construction: which nodes of plane j get a
// right circle (plus), a left circle (minus), a target parabola, and which
// targets get the extra tilde parabola at xi_k + 1.
struct IndexSets {
  int n = 0;
  std::map<int, std::set<int>> plus;    // plane j in 1..5 -> node indices
  std::map<int, std::set<int>> minus;   // plane j in 1..5 -> node indices
  std::map<int, std::set<int>> tilde;   // plane j in 3..5 -> node indices k (parabola at xi_k + 1)
  std::set<int> targets(int j) const;   // nodes whose incoming connections lie in plane j
};
IndexSets index_sets(int n);  // n >= 4

struct EllipseParams {
  double a = 0.0, b = 0.0, c = 0.0;
};
// Wide blocking ellipse covering l consecutive nodes, anchored for plane 1
// (c = l + 3/2) or plane 2 (c = l + 7/2).  a, b follow the curated values
// for l <= 3 and a bounded extension rule beyond.
EllipseParams wide_ellipse_params(int l, int plane);

// The four curated low-dimensional systems, n in {3,4,5,6}; dim = 4,5,6,6.
VectorFieldSpec build_explicit(int n, double epsilon);

// The general family for arbitrary n in [4, 40]; always dim = 6.
VectorFieldSpec build_general(int n, double epsilon);

// Largest epsilon in {10^0, 10^-1, ..., 10^-30} such that on a 1000-point grid
// over [0, 2n]:  max |eps * axis| <= kappa * min_j max |f_j(x, 0)|.
// Throws numerical_error if no grid value qualifies.
double calibrate_epsilon(const VectorFieldSpec& spec, double kappa);

nlohmann::json to_json(const VectorFieldSpec& spec);
VectorFieldSpec spec_from_json(const nlohmann::json& j);

// Human-readable factored equations, one line per component.
std::string equation_text(const VectorFieldSpec& spec);

}  // namespace hetnet
