#include "hetnet/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "hetnet/io_util.hpp"

namespace hetnet {

namespace {

void check_state(const VectorFieldSpec& spec, const std::vector<double>& u) {
  if (static_cast<int>(u.size()) != spec.dim())
    throw std::invalid_argument("state size " + std::to_string(u.size()) +
                                " does not match field dimension " + std::to_string(spec.dim()));
}

// Eigenvalues of [[a, b], [c, d]].
void eig2(double a, double b, double c, double d, std::vector<std::complex<double>>& out) {
  double tr2 = 0.5 * (a + d);
  double disc = 0.25 * (a - d) * (a - d) + b * c;
  if (disc >= 0.0) {
    double s = std::sqrt(disc);
    out.emplace_back(tr2 + s, 0.0);
    out.emplace_back(tr2 - s, 0.0);
  } else {
    double s = std::sqrt(-disc);
    out.emplace_back(tr2, s);
    out.emplace_back(tr2, -s);
  }
}

double product_value(const std::vector<FactorTerm>& fs, double x, double y) {
  double p = 1.0;
  for (const FactorTerm& t : fs) p *= t.value(x, y);
  return p;
}

}  // namespace

void eval_field_into(const VectorFieldSpec& spec, const double* u, double* du) {
  double x = u[0];
  double dx = -spec.epsilon * spec.axis.value(x, 0.0);
  for (std::size_t j = 0; j < spec.planes.size(); ++j) {
    double y = u[j + 1];
    if (y == 0.0) {  // exact: both contributions vanish with y
      du[j + 1] = 0.0;
      continue;
    }
    const PlaneComponent& pc = spec.planes[j];
    dx += y * product_value(pc.f, x, y);
    du[j + 1] = pc.sigma * y * product_value(pc.g, x, y);
  }
  du[0] = dx;
}

std::vector<double> eval_field(const VectorFieldSpec& spec, const std::vector<double>& u) {
  check_state(spec, u);
  std::vector<double> du(u.size(), 0.0);
  eval_field_into(spec, u.data(), du.data());
  return du;
}

std::vector<double> jacobian_matrix(const VectorFieldSpec& spec, const std::vector<double>& u) {
  check_state(spec, u);
  int dim = spec.dim();
  double x = u[0];
  std::vector<double> J(static_cast<std::size_t>(dim) * dim, 0.0);
  double dxx = -spec.epsilon * spec.axis.ddx(x, 0.0);
  for (int j = 1; j < dim; ++j) {
    double y = u[j];
    const PlaneComponent& pc = spec.planes[j - 1];
    ProductEval f = eval_product(pc.f, x, y);
    ProductEval g = eval_product(pc.g, x, y);
    dxx += y * f.ddx;
    J[0 * dim + j] = f.value + y * f.ddy;
    J[j * dim + 0] = pc.sigma * y * g.ddx;
    J[j * dim + j] = pc.sigma * (g.value + y * g.ddy);
  }
  J[0] = dxx;
  return J;
}

std::vector<std::complex<double>> equilibrium_spectrum(const VectorFieldSpec& spec,
                                                       const std::vector<double>& u) {
  check_state(spec, u);
  int dim = spec.dim();
  int active = 0;
  for (int j = 1; j < dim; ++j)
    if (u[j] != 0.0) {
      if (active != 0)
        throw std::invalid_argument(
            "spectrum is available on the axis or within a single coordinate plane");
      active = j;
    }
  std::vector<double> J = jacobian_matrix(spec, u);
  std::vector<std::complex<double>> eig;
  eig.reserve(dim);
  if (active == 0) {
    // diagonal after dropping the zero off-diagonal column entries
    for (int j = 0; j < dim; ++j) eig.emplace_back(J[j * dim + j], 0.0);
  } else {
    // block triangular: (x, y_active) block, remaining rows diagonal
    eig2(J[0], J[0 * dim + active], J[active * dim + 0], J[active * dim + active], eig);
    for (int j = 1; j < dim; ++j)
      if (j != active) eig.emplace_back(J[j * dim + j], 0.0);
  }
  return eig;
}

void classify_equilibrium(const VectorFieldSpec& spec, Equilibrium& eq) {
  eq.eigenvalues = equilibrium_spectrum(spec, eq.u);
  // The rates in one spectrum legitimately span many orders of magnitude (the
  // axis slope grows factorially with n while transverse rates stay order 1),
  // so the zero test must be absolute: a tolerance relative to the largest
  // rate would swallow genuinely nonzero transverse rates.
  constexpr double tol = 1e-12;
  int pos = 0, neg = 0;
  for (const auto& l : eq.eigenvalues) {
    if (std::abs(l.real()) <= tol)
      throw numerical_error("non-hyperbolic equilibrium at x = " + std::to_string(eq.u[0]) +
                            " (eigenvalue real part " + std::to_string(l.real()) +
                            " within tolerance of zero; epsilon = " + std::to_string(spec.epsilon) +
                            ")");
    if (l.real() > 0.0)
      ++pos;
    else
      ++neg;
  }
  eq.n_unstable = pos;
  if (pos == 0)
    eq.type = "sink";
  else if (neg == 0)
    eq.type = "source";
  else
    eq.type = "saddle";
}

std::vector<Equilibrium> find_axis_equilibria(const VectorFieldSpec& spec) {
  int n = spec.n;
  double hi = spec.domain_x_max();
  auto A = [&](double x) { return spec.axis.value(x, 0.0); };
  auto Ap = [&](double x) { return spec.axis.ddx(x, 0.0); };

  std::vector<double> roots;
  const int grid = 8000;
  double prev_x = 0.0, prev_v = A(0.0);
  if (prev_v == 0.0) roots.push_back(0.0);
  for (int i = 1; i <= grid; ++i) {
    double x = hi * i / grid;
    double v = A(x);
    if (v == 0.0) {
      roots.push_back(x);
    } else if (prev_v != 0.0 && std::signbit(v) != std::signbit(prev_v)) {
      double a = prev_x, b = x, fa = prev_v;
      for (int it = 0; it < 80; ++it) {
        double m = 0.5 * (a + b);
        double fm = A(m);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        if (std::signbit(fm) == std::signbit(fa)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      double r = 0.5 * (a + b);
      for (int it = 0; it < 4; ++it) {
        double d = Ap(r);
        if (d == 0.0) break;
        r -= A(r) / d;
      }
      roots.push_back(r);
    }
    prev_x = x;
    prev_v = v;
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-9; }),
              roots.end());

  if (static_cast<int>(roots.size()) != 2 * n - 1)
    throw numerical_error("construction violation: expected " + std::to_string(2 * n - 1) +
                          " axis equilibria, found " + std::to_string(roots.size()));

  std::vector<Equilibrium> eqs;
  for (double r : roots) {
    Equilibrium eq;
    eq.u.assign(spec.dim(), 0.0);
    eq.u[0] = r;
    eq.plane = 0;
    double nearest = std::round(r);
    if (std::abs(r - nearest) < 1e-6 && std::fmod(nearest, 2.0) == 1.0) {
      int k = static_cast<int>((nearest + 1) / 2);
      if (k >= 1 && k <= n) {
        eq.is_node = true;
        eq.node_index = k;
      }
    }
    classify_equilibrium(spec, eq);
    eqs.push_back(std::move(eq));
  }
  return eqs;
}

std::vector<Equilibrium> find_plane_equilibria(const VectorFieldSpec& spec, int plane,
                                               int* discarded_seeds) {
  if (plane < 1 || plane > static_cast<int>(spec.planes.size()))
    throw std::invalid_argument("plane index out of range");
  const PlaneComponent& pc = spec.planes[plane - 1];
  double hi = spec.domain_x_max();

  auto F = [&](double x, double y, double& F1, double& F2) {
    F1 = -spec.epsilon * spec.axis.value(x, 0.0) + y * product_value(pc.f, x, y);
    F2 = pc.sigma * y * product_value(pc.g, x, y);
  };

  std::vector<std::array<double, 2>> found;
  int discarded = 0;
  const int N = 200;
  for (int i = 0; i < N; ++i) {
    for (int m = 0; m < N; ++m) {
      double x = hi * i / (N - 1);
      double y = 2.0 * (m + 1) / N;
      bool converged = false;
      for (int it = 0; it < 60; ++it) {
        double F1, F2;
        F(x, y, F1, F2);
        ProductEval f = eval_product(pc.f, x, y);
        ProductEval g = eval_product(pc.g, x, y);
        double J11 = -spec.epsilon * spec.axis.ddx(x, 0.0) + y * f.ddx;
        double J12 = f.value + y * f.ddy;
        double J21 = pc.sigma * y * g.ddx;
        double J22 = pc.sigma * (g.value + y * g.ddy);
        double det = J11 * J22 - J12 * J21;
        if (det == 0.0 || !std::isfinite(det)) break;
        double dx = (F1 * J22 - F2 * J12) / det;
        double dy = (J11 * F2 - J21 * F1) / det;
        x -= dx;
        y -= dy;
        if (!std::isfinite(x) || !std::isfinite(y) || std::abs(x) > 1e3 || std::abs(y) > 1e3)
          break;
        if (std::abs(dx) < 1e-12 && std::abs(dy) < 1e-12) {
          converged = true;
          break;
        }
      }
      if (!converged) {
        ++discarded;
        continue;
      }
      // keep genuine off-axis points inside the plane search box
      if (y < 1e-7 || y > 2.0 || x < 0.0 || x > hi) continue;
      double F1, F2;
      F(x, y, F1, F2);
      double s1 = std::abs(spec.epsilon * spec.axis.value(x, 0.0)) +
                  std::abs(y * product_value(pc.f, x, y));
      double s2 = std::abs(y) * std::abs(product_value(pc.g, x, y));
      if (std::abs(F1) > 1e-7 * (1.0 + s1) || std::abs(F2) > 1e-7 * (1.0 + s2)) {
        ++discarded;
        continue;
      }
      bool dup = false;
      for (const auto& p : found)
        if (std::abs(p[0] - x) < 1e-6 && std::abs(p[1] - y) < 1e-6) {
          dup = true;
          break;
        }
      if (!dup) found.push_back({x, y});
    }
  }
  if (discarded_seeds) *discarded_seeds = discarded;

  std::sort(found.begin(), found.end());
  std::vector<Equilibrium> eqs;
  for (const auto& p : found) {
    Equilibrium eq;
    eq.u.assign(spec.dim(), 0.0);
    eq.u[0] = p[0];
    eq.u[plane] = p[1];
    eq.plane = plane;
    classify_equilibrium(spec, eq);
    eqs.push_back(std::move(eq));
  }
  return eqs;
}

std::vector<std::vector<double>> node_transverse_rates(const VectorFieldSpec& spec) {
  std::vector<std::vector<double>> rates;
  for (int k = 1; k <= spec.n; ++k) {
    double x = 2.0 * k - 1.0;
    std::vector<double> row;
    for (const PlaneComponent& pc : spec.planes)
      row.push_back(pc.sigma * product_value(pc.g, x, 0.0));
    rates.push_back(std::move(row));
  }
  return rates;
}

std::string equilibria_csv(const std::vector<Equilibrium>& eqs, int dim) {
  std::string s = "plane,is_node,node_index,type,n_unstable,x";
  for (int j = 1; j < dim; ++j) s += ",y" + std::to_string(j);
  for (int j = 0; j < dim; ++j)
    s += ",eig" + std::to_string(j + 1) + "_re,eig" + std::to_string(j + 1) + "_im";
  s += "\n";
  for (const Equilibrium& eq : eqs) {
    s += std::to_string(eq.plane) + "," + (eq.is_node ? "1" : "0") + "," +
         std::to_string(eq.node_index) + "," + eq.type + "," + std::to_string(eq.n_unstable);
    for (double v : eq.u) s += "," + format17(v);
    for (const auto& l : eq.eigenvalues) s += "," + format17(l.real()) + "," + format17(l.imag());
    s += "\n";
  }
  return s;
}

}  // namespace hetnet
