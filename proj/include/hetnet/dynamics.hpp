// Pointwise evaluation of the vector field: right-hand side, analytic
// Jacobian, equilibrium location on the axis and inside coordinate planes,
// and spectra of the block-triangular linearization at such points.
#pragma once

#include <complex>
#include <string>
#include <vector>

#include "hetnet/construct.hpp"

namespace hetnet {

// State layout: u = (x, y_1, ..., y_d) with d = spec.planes.size().
std::vector<double> eval_field(const VectorFieldSpec& spec, const std::vector<double>& u);

// Allocation-free variant for integrator inner loops; u and du point to
// spec.dim() doubles.
void eval_field_into(const VectorFieldSpec& spec, const double* u, double* du);

// Row-major dim x dim analytic Jacobian at u.
std::vector<double> jacobian_matrix(const VectorFieldSpec& spec, const std::vector<double>& u);

struct Equilibrium {
  std::vector<double> u;  // full-space coordinates
  int plane = 0;          // 0 when on the axis, else index of the nonzero coordinate plane
  bool is_node = false;   // axis point sitting at a network node position
  int node_index = 0;     // k when is_node, else 0
  std::string type;       // sink / source / saddle / nonhyperbolic
  int n_unstable = 0;     // eigenvalues with positive real part
  std::vector<std::complex<double>> eigenvalues;
};

// Spectrum of the Jacobian at an axis point or a single-plane point, where the
// matrix is block triangular: a (x, y_j) block plus diagonal transverse
// entries. Throws std::invalid_argument if more than one y-coordinate is
// nonzero.
std::vector<std::complex<double>> equilibrium_spectrum(const VectorFieldSpec& spec,
                                                       const std::vector<double>& u);

// Fill type / n_unstable / eigenvalues of an equilibrium in place.
void classify_equilibrium(const VectorFieldSpec& spec, Equilibrium& eq);

// Locate all zeros of the axis polynomial in [0, 2n] by bracketing and
// bisection. Throws numerical_error unless exactly 2n-1 are found.
std::vector<Equilibrium> find_axis_equilibria(const VectorFieldSpec& spec);

// Equilibria of the flow restricted to one coordinate plane with y > 0:
// Newton iteration from a 200 x 200 grid of seeds over [0, 2n] x (0, 2],
// merged within 1e-6. Diverging seeds are discarded; their count is reported
// through discarded_seeds when non-null.
std::vector<Equilibrium> find_plane_equilibria(const VectorFieldSpec& spec, int plane,
                                               int* discarded_seeds = nullptr);

// sigma_j * g_j(xi_k, 0) for node k = 1..n (rows) and plane j (columns):
// the transverse growth rates that encode the connection digraph.
std::vector<std::vector<double>> node_transverse_rates(const VectorFieldSpec& spec);

std::string equilibria_csv(const std::vector<Equilibrium>& eqs, int dim);

}  // namespace hetnet
