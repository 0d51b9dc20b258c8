#pragma once

// Calibration constants, pinned once on the P^1 Fubini-Study fixture.
//
// Conventions in force (d^c = i(dbar - d), dd^c = 2i d dbar, s_j = log|z_j|):
//   - the moment map of a state is m(s) = grad_s F(s);
//   - omega_phi^n corresponds to the s-density n! (2pi)^n det Hess F(s) ds
//     after integrating the torus fibers;
//   - the Duistermaat-Heckman measure of any state over P is
//     n! (2pi)^n * Lebesgue.
//
// The lab reports every mass, energy and entropy in DH-normalized units,
// i.e. with the factor n! (2pi)^n divided out, so that the total mass of a
// state equals the Lebesgue volume of its polytope. The factor itself is
// exposed here; the calibration suite checks it against the class volume of
// the Fubini-Study fixture.

#include <cmath>

namespace wkl {

// n! (2 pi)^n: ratio between geometric mass int omega^n and Vol(P).
inline double geometric_mass_factor(int dim) {
  double f = 1.0;
  for (int i = 1; i <= dim; ++i) f *= i * 2.0 * M_PI;
  return f;
}

}  // namespace wkl
