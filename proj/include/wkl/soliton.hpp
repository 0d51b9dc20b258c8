#pragma once

// Closed-form one-dimensional weighted solitons for v(x) = exp(xi x).
//
// In symplectic coordinates the soliton equation Ric_v^T(Omega) = Omega
// reduces to the linear two-point problem
//     W'(x) = -xi W(x) - 2x,   W(x_l) = W(x_r) = 0,   W = 1 / G'',
// on an interval of anticanonical length x_r - x_l = 2. Shooting on the
// interval placement tau = (x_l + x_r)/2 matches both roots and gives
//     tau = 1/xi - coth(xi),   W(x) = A e^{-xi x} - 2x/xi + 2/xi^2.
// The facet labels u_l = -1/x_l, u_r = -1/x_r then carry offsets exactly 1
// (the Fano normalization); for xi != 0 they are non-integral, i.e. the
// fixed points are conical, and xi = 0 recovers the round Fubini-Study
// state on [-1, 1].

#include <memory>

#include "wkl/state.hpp"

namespace wkl {

struct SolitonSolution {
  double xi = 0;
  double tau = 0;      // interval midpoint
  double x_left = -1;  // roots of W
  double x_right = 1;
  double amp = 0;      // coefficient A (0 when xi == 0)

  double w(double x) const;    // W(x) = 1 / G''(x)
  double dw(double x) const;   // W'
  double d2w(double x) const;  // W''
};

SolitonSolution solve_soliton_1d(double xi);

// Offsets-one labelled interval [tau - 1, tau + 1].
std::shared_ptr<const Polytope> soliton_polytope(const SolitonSolution& sol);

// Correction h = G_sol - G_can over the labelled polytope: analytic second
// to fourth derivatives, value and slope by panel quadrature from the
// midpoint (gauge h(tau) = h'(tau) = 0).
SmoothFnPtr soliton_correction(const SolitonSolution& sol);

StatePtr soliton_state(double xi, const SGridSpec& grid);

}  // namespace wkl
