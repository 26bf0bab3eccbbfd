#include "hetnet/construct.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace hetnet {

namespace {

double xi(int k) { return 2.0 * k - 1.0; }

FactorTerm P_plus(double anchor) { return {FactorKind::ParabolaRight, anchor}; }
FactorTerm P_minus(double anchor) { return {FactorKind::ParabolaLeft, anchor}; }
FactorTerm E_plus(int k) { return {FactorKind::CircleRightCentered, xi(k)}; }
FactorTerm E_minus(int k) { return {FactorKind::CircleLeftCentered, xi(k)}; }

FactorTerm wide(double a, double b, double center) {
  FactorTerm t{FactorKind::WideEllipse, center};
  t.a = a;
  t.b = b;
  return t;
}

// small blocking ellipses used inside g_3..g_5 (coverage l = 1 or 2)
FactorTerm E1(double center) { return wide(4.0, 0.5, center); }
FactorTerm E2(double center) { return wide(16.0, 3.0, center); }

// the pair of left parabolas blocking node m from both sides
void push_pm(std::vector<FactorTerm>& v, int m) {
  v.push_back(P_minus(xi(m) - 0.5));
  v.push_back(P_minus(xi(m) + 0.5));
}

FactorTerm make_axis(int n) {
  FactorTerm t{FactorKind::AxisProduct};
  for (int k = 1; k <= 2 * n - 1; ++k) t.axis_roots.push_back(k);
  return t;
}

// f_j of the explicit systems for the single-target planes: the target's left
// parabola first, then one circle per remaining node in ascending order,
// opening right of nodes before the target and left of nodes after it.
std::vector<FactorTerm> triangular_f(int j, int n) {
  std::vector<FactorTerm> v{P_minus(xi(j))};
  for (int k = 1; k <= n; ++k) {
    if (k == j) continue;
    v.push_back(k < j ? E_plus(k) : E_minus(k));
  }
  return v;
}

}  // namespace

const char* factor_kind_name(FactorKind k) {
  switch (k) {
    case FactorKind::ParabolaRight: return "ParabolaRight";
    case FactorKind::ParabolaLeft: return "ParabolaLeft";
    case FactorKind::CircleRightCentered: return "CircleRightCentered";
    case FactorKind::CircleLeftCentered: return "CircleLeftCentered";
    case FactorKind::WideEllipse: return "WideEllipse";
    case FactorKind::AxisProduct: return "AxisProduct";
  }
  throw std::invalid_argument("unknown factor kind");
}

FactorKind factor_kind_from_name(const std::string& name) {
  for (FactorKind k : {FactorKind::ParabolaRight, FactorKind::ParabolaLeft,
                       FactorKind::CircleRightCentered, FactorKind::CircleLeftCentered,
                       FactorKind::WideEllipse, FactorKind::AxisProduct})
    if (name == factor_kind_name(k)) return k;
  throw std::invalid_argument("unknown factor kind: " + name);
}

double FactorTerm::value(double x, double y) const {
  switch (kind) {
    case FactorKind::ParabolaRight: return y * y - x + anchor;
    case FactorKind::ParabolaLeft: return -y * y - x + anchor;
    case FactorKind::CircleRightCentered: {
      double dx = x - (anchor + 0.5);
      return y * y + dx * dx - 0.25;
    }
    case FactorKind::CircleLeftCentered: {
      double dx = x - (anchor - 0.5);
      return y * y + dx * dx - 0.25;
    }
    case FactorKind::WideEllipse: {
      double dx = x - anchor;
      return a * y * y + dx * dx - b;
    }
    case FactorKind::AxisProduct: {
      double p = 1.0;
      for (int r : axis_roots) p *= x - r;
      return p;
    }
  }
  return 0.0;
}

double FactorTerm::ddx(double x, double y) const {
  switch (kind) {
    case FactorKind::ParabolaRight:
    case FactorKind::ParabolaLeft: return -1.0;
    case FactorKind::CircleRightCentered: return 2.0 * (x - (anchor + 0.5));
    case FactorKind::CircleLeftCentered: return 2.0 * (x - (anchor - 0.5));
    case FactorKind::WideEllipse: return 2.0 * (x - anchor);
    case FactorKind::AxisProduct: {
      // d/dx prod (x-r) via running product rule
      double p = 1.0, d = 0.0;
      for (int r : axis_roots) {
        d = d * (x - r) + p;
        p *= x - r;
      }
      return d;
    }
  }
  (void)y;
  return 0.0;
}

double FactorTerm::ddy(double x, double y) const {
  (void)x;
  switch (kind) {
    case FactorKind::ParabolaRight: return 2.0 * y;
    case FactorKind::ParabolaLeft: return -2.0 * y;
    case FactorKind::CircleRightCentered:
    case FactorKind::CircleLeftCentered: return 2.0 * y;
    case FactorKind::WideEllipse: return 2.0 * a * y;
    case FactorKind::AxisProduct: return 0.0;
  }
  return 0.0;
}

ProductEval eval_product(const std::vector<FactorTerm>& factors, double x, double y) {
  ProductEval e;
  for (const FactorTerm& t : factors) {
    double v = t.value(x, y);
    e.ddx = e.ddx * v + e.value * t.ddx(x, y);
    e.ddy = e.ddy * v + e.value * t.ddy(x, y);
    e.value *= v;
  }
  return e;
}

std::vector<double> VectorFieldSpec::node_positions() const {
  std::vector<double> p;
  for (int k = 1; k <= n; ++k) p.push_back(xi(k));
  return p;
}

std::set<int> IndexSets::targets(int j) const {
  std::set<int> t;
  if (j <= 2) {
    t.insert(j);
  } else {
    for (int k = j; k <= n; k += 3) t.insert(k);
  }
  return t;
}

IndexSets index_sets(int n) {
  if (n < 4) throw std::invalid_argument("index sets are defined for n >= 4, got n = " + std::to_string(n));
  IndexSets s;
  s.n = n;
  auto range = [](int lo, int hi) {
    std::set<int> r;
    for (int k = lo; k <= hi; ++k) r.insert(k);
    return r;
  };
  s.plus[1] = {};
  s.minus[1] = range(2, n);
  s.plus[2] = {1};
  s.minus[2] = range(3, n);
  switch (n % 3) {
    case 0:
      s.minus[3] = {};
      s.minus[4] = {n - 1, n};
      s.minus[5] = {n};
      break;
    case 1:
      s.minus[3] = {n};
      s.minus[4] = {};
      s.minus[5] = {n - 1, n};
      break;
    default:  // n = 3k+2
      s.minus[3] = {n - 1, n};
      s.minus[4] = {n};
      s.minus[5] = {};
      break;
  }
  for (int j = 3; j <= 5; ++j) {
    std::set<int> t = s.targets(j);
    std::set<int> p = range(1, n);
    for (int k : t) p.erase(k);
    for (int k : s.minus[j]) p.erase(k);
    s.plus[j] = p;
    // every connection group except the last gets a parabola at xi_k + 1,
    // opening the gap that lets trajectories pass between groups
    if (!t.empty()) t.erase(std::prev(t.end()));
    s.tilde[j] = t;
  }
  return s;
}

EllipseParams wide_ellipse_params(int l, int plane) {
  if (l < 1) throw std::invalid_argument("wide ellipse needs coverage l >= 1");
  if (plane != 1 && plane != 2) throw std::invalid_argument("wide ellipse anchors exist for planes 1 and 2 only");
  EllipseParams p;
  if (l == 1) {
    p.a = 4.0;
    p.b = 0.5;
  } else if (l == 2) {
    p.a = 16.0;
    p.b = 3.0;
  } else if (l == 3) {
    p.a = 64.0;
    p.b = 7.0;
  } else {
    // bounded extension keeping a > b > (l - 1/2)^2
    p.b = (l - 0.5) * (l - 0.5) + 0.75;
    p.a = std::min(std::pow(4.0, l), 1024.0);
    p.a = std::max(p.a, 2.0 * p.b);
  }
  p.c = plane == 1 ? l + 1.5 : l + 3.5;
  return p;
}

VectorFieldSpec build_explicit(int n, double epsilon) {
  if (n < 3 || n > 6)
    throw std::invalid_argument("explicit systems exist for n in {3,4,5,6}, got n = " + std::to_string(n));
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be nonnegative");

  VectorFieldSpec s;
  s.n = n;
  s.mode = "explicit";
  s.epsilon = epsilon;
  s.axis = make_axis(n);

  auto plane = [&](std::vector<FactorTerm> f, std::vector<FactorTerm> g, double sigma) {
    s.planes.push_back(PlaneComponent{sigma, std::move(f), std::move(g)});
  };

  if (n == 3) {
    plane(triangular_f(1, 3), {P_plus(1.5)}, -1.0);
    plane(triangular_f(2, 3), {P_minus(2.5), P_plus(3.5)}, 1.0);
    plane(triangular_f(3, 3), {P_minus(4.5)}, 1.0);
  } else if (n == 4) {
    plane(triangular_f(1, 4), {P_plus(1.5), E1(2.5)}, -1.0);
    plane(triangular_f(2, 4), {P_minus(2.5), P_plus(3.5), E1(4.5)}, 1.0);
    plane(triangular_f(3, 4), {P_minus(4.5), P_minus(5.5), E1(6.5)}, 1.0);
    plane(triangular_f(4, 4), {P_minus(6.5), E1(1.5)}, 1.0);
  } else if (n == 5) {
    plane(triangular_f(1, 5), {P_plus(1.5), E2(3.5)}, -1.0);
    plane(triangular_f(2, 5), {P_minus(2.5), P_plus(3.5), E2(5.5)}, 1.0);
    plane(triangular_f(3, 5), {P_minus(4.5), P_minus(5.5), E2(7.5)}, 1.0);
    plane(triangular_f(4, 5), {P_minus(6.5), P_minus(7.5), E1(1.5), E1(8.5)}, 1.0);
    plane(triangular_f(5, 5), {P_minus(8.5), E2(2.5)}, 1.0);
  } else {
    plane(triangular_f(1, 6), {P_plus(1.5), wide(64.0, 7.0, 4.5)}, -1.0);
    plane(triangular_f(2, 6), {P_minus(2.5), P_plus(3.5), wide(64.0, 7.0, 6.5)}, 1.0);
    // plane 3 carries both target nodes 3 and 6, plus the passage parabola at x = 6
    plane({P_minus(xi(3)), E_plus(1), E_plus(2), P_minus(xi(6)), E_plus(4), E_plus(5), P_minus(6.0)},
          {P_minus(4.5), P_minus(5.5), P_minus(10.5)}, 1.0);
    plane(triangular_f(4, 6), {P_minus(6.5), P_minus(7.5), E1(1.5), E2(9.5)}, 1.0);
    plane(triangular_f(5, 6), {P_minus(8.5), P_minus(9.5), E1(10.5), E2(2.5)}, 1.0);
  }
  return s;
}

VectorFieldSpec build_general(int n, double epsilon) {
  if (n < 4) throw std::invalid_argument("general construction starts at n = 4; use the explicit n = 3 system");
  if (n > 40)
    throw std::invalid_argument("n > 40 refused: axis-product magnitudes approach double overflow");
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be nonnegative");

  VectorFieldSpec s;
  s.n = n;
  s.mode = "general";
  s.epsilon = epsilon;
  s.axis = make_axis(n);

  IndexSets idx = index_sets(n);
  int l = n - 3;
  int kk = n / 3;

  for (int j = 1; j <= 5; ++j) {
    PlaneComponent pc;
    pc.sigma = j == 1 ? -1.0 : 1.0;

    std::set<int> targets = idx.targets(j);
    for (int k = 1; k <= n; ++k) {
      if (targets.count(k)) {
        pc.f.push_back(P_minus(xi(k)));
      } else if (idx.plus[j].count(k)) {
        pc.f.push_back(E_plus(k));
      } else {
        assert(idx.minus[j].count(k));
        pc.f.push_back(E_minus(k));
      }
    }
    if (j >= 3)
      for (int k : idx.tilde[j]) pc.f.push_back(P_minus(xi(k) + 1.0));

    switch (j) {
      case 1: {
        EllipseParams ep = wide_ellipse_params(l, 1);
        pc.g = {P_plus(xi(1) + 0.5), wide(ep.a, ep.b, ep.c)};
        break;
      }
      case 2: {
        EllipseParams ep = wide_ellipse_params(l, 2);
        pc.g = {P_minus(xi(2) - 0.5), P_plus(xi(2) + 0.5), wide(ep.a, ep.b, ep.c)};
        break;
      }
      case 3:
        switch (n % 3) {
          case 0:
            pc.g = {P_minus(xi(n) - 0.5)};
            for (int m = 1; m <= kk - 1; ++m) push_pm(pc.g, 3 * m);
            break;
          case 1:
            pc.g = {E1(xi(n) - 0.5)};
            for (int m = 1; m <= kk; ++m) push_pm(pc.g, 3 * m);
            break;
          default:
            pc.g = {E2(xi(n) - 1.5)};
            for (int m = 1; m <= kk; ++m) push_pm(pc.g, 3 * m);
            break;
        }
        break;
      case 4:
        switch (n % 3) {
          case 0:
            pc.g = {E1(xi(1) + 0.5), E2(xi(n) - 1.5)};
            for (int m = 1; m <= kk - 1; ++m) push_pm(pc.g, 3 * m + 1);
            break;
          case 1:
            pc.g = {P_minus(xi(n) - 0.5), E1(xi(1) + 0.5)};
            for (int m = 1; m <= kk - 1; ++m) push_pm(pc.g, 3 * m + 1);
            break;
          default:
            pc.g = {E1(xi(1) + 0.5), E1(xi(n) - 0.5)};
            for (int m = 1; m <= kk; ++m) push_pm(pc.g, 3 * m + 1);
            break;
        }
        break;
      case 5:
        switch (n % 3) {
          case 0:
            pc.g = {E2(xi(1) + 1.5), E1(xi(n) - 0.5)};
            for (int m = 1; m <= kk - 1; ++m) push_pm(pc.g, 3 * m + 2);
            break;
          case 1:
            pc.g = {E2(xi(1) + 1.5), E2(xi(n) - 1.5)};
            for (int m = 1; m <= kk - 1; ++m) push_pm(pc.g, 3 * m + 2);
            break;
          default:
            pc.g = {P_minus(xi(n) - 0.5), E2(xi(1) + 1.5)};
            for (int m = 1; m <= kk - 1; ++m) push_pm(pc.g, 3 * m + 2);
            break;
        }
        break;
    }
    s.planes.push_back(std::move(pc));
  }
  return s;
}

double calibrate_epsilon(const VectorFieldSpec& spec, double kappa) {
  if (kappa >= 1.0) throw std::invalid_argument("kappa must lie in (0,1)");
  const int grid = 1000;
  double axis_max = 0.0;
  std::vector<double> fmax(spec.planes.size(), 0.0);
  for (int i = 0; i < grid; ++i) {
    double x = spec.domain_x_max() * i / (grid - 1);
    axis_max = std::max(axis_max, std::abs(spec.axis.value(x, 0.0)));
    for (std::size_t j = 0; j < spec.planes.size(); ++j) {
      double v = 1.0;
      for (const FactorTerm& t : spec.planes[j].f) v *= t.value(x, 0.0);
      fmax[j] = std::max(fmax[j], std::abs(v));
    }
  }
  double fmin = *std::min_element(fmax.begin(), fmax.end());
  for (int p = 0; p >= -30; --p) {
    double eps = std::pow(10.0, p);
    if (eps * axis_max <= kappa * fmin) return eps;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "calibration failure: no epsilon in {1e0..1e-30} satisfies "
                "eps*%.3e <= kappa*%.3e (kappa = %g)",
                axis_max, fmin, kappa);
  throw numerical_error(buf);
}

namespace {

nlohmann::json factor_to_json(const FactorTerm& t) {
  nlohmann::json j;
  j["kind"] = factor_kind_name(t.kind);
  if (t.kind == FactorKind::AxisProduct) {
    j["axis_roots"] = t.axis_roots;
  } else {
    j["anchor"] = t.anchor;
    if (t.kind == FactorKind::WideEllipse) {
      j["a"] = t.a;
      j["b"] = t.b;
    }
  }
  return j;
}

FactorTerm factor_from_json(const nlohmann::json& j) {
  FactorTerm t;
  t.kind = factor_kind_from_name(j.at("kind").get<std::string>());
  if (t.kind == FactorKind::AxisProduct) {
    t.axis_roots = j.at("axis_roots").get<std::vector<int>>();
  } else {
    t.anchor = j.at("anchor").get<double>();
    if (t.kind == FactorKind::WideEllipse) {
      t.a = j.at("a").get<double>();
      t.b = j.at("b").get<double>();
    }
  }
  return t;
}

}  // namespace

nlohmann::json to_json(const VectorFieldSpec& spec) {
  nlohmann::json j;
  j["n"] = spec.n;
  j["mode"] = spec.mode;
  j["dim"] = spec.dim();
  j["epsilon"] = spec.epsilon;
  j["node_positions"] = spec.node_positions();
  j["axis"] = factor_to_json(spec.axis);
  auto planes = nlohmann::json::array();
  for (const PlaneComponent& pc : spec.planes) {
    nlohmann::json pj;
    pj["sigma"] = pc.sigma;
    auto fj = nlohmann::json::array();
    for (const FactorTerm& t : pc.f) fj.push_back(factor_to_json(t));
    auto gj = nlohmann::json::array();
    for (const FactorTerm& t : pc.g) gj.push_back(factor_to_json(t));
    pj["f"] = fj;
    pj["g"] = gj;
    planes.push_back(pj);
  }
  j["planes"] = planes;
  return j;
}

VectorFieldSpec spec_from_json(const nlohmann::json& j) {
  VectorFieldSpec s;
  s.n = j.at("n").get<int>();
  s.mode = j.at("mode").get<std::string>();
  s.epsilon = j.at("epsilon").get<double>();
  s.axis = factor_from_json(j.at("axis"));
  for (const auto& pj : j.at("planes")) {
    PlaneComponent pc;
    pc.sigma = pj.at("sigma").get<double>();
    for (const auto& fj : pj.at("f")) pc.f.push_back(factor_from_json(fj));
    for (const auto& gj : pj.at("g")) pc.g.push_back(factor_from_json(gj));
    s.planes.push_back(std::move(pc));
  }
  if (s.dim() != j.at("dim").get<int>())
    throw std::invalid_argument("spec JSON: dim field disagrees with plane count");
  return s;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string factor_text(const FactorTerm& t, const std::string& y) {
  switch (t.kind) {
    case FactorKind::ParabolaRight: return "(" + y + "^2 - x + " + num(t.anchor) + ")";
    case FactorKind::ParabolaLeft: return "(-" + y + "^2 - x + " + num(t.anchor) + ")";
    case FactorKind::CircleRightCentered:
      return "(" + y + "^2 + (x - " + num(t.anchor + 0.5) + ")^2 - 1/4)";
    case FactorKind::CircleLeftCentered:
      return "(" + y + "^2 + (x - " + num(t.anchor - 0.5) + ")^2 - 1/4)";
    case FactorKind::WideEllipse:
      return "(" + num(t.a) + "*" + y + "^2 + (x - " + num(t.anchor) + ")^2 - " + num(t.b) + ")";
    case FactorKind::AxisProduct: {
      std::string s;
      for (int r : t.axis_roots) s += "(x-" + std::to_string(r) + ")";
      return s;
    }
  }
  return "";
}

}  // namespace

std::string equation_text(const VectorFieldSpec& spec) {
  std::ostringstream os;
  os << "n = " << spec.n << ", mode = " << spec.mode << ", dim = " << spec.dim()
     << ", epsilon = " << num(spec.epsilon) << "\n\n";
  os << "x' = -epsilon*" << factor_text(spec.axis, "");
  for (std::size_t j = 1; j <= spec.planes.size(); ++j) {
    std::string y = "y" + std::to_string(j);
    os << "\n   + " << y;
    for (const FactorTerm& t : spec.planes[j - 1].f) os << "*" << factor_text(t, y);
  }
  os << "\n";
  for (std::size_t j = 1; j <= spec.planes.size(); ++j) {
    std::string y = "y" + std::to_string(j);
    os << "\n" << y << "' = " << (spec.planes[j - 1].sigma < 0 ? "-" : "") << y;
    for (const FactorTerm& t : spec.planes[j - 1].g) os << "*" << factor_text(t, y);
  }
  os << "\n";
  return os.str();
}

}  // namespace hetnet
