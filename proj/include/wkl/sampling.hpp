#pragma once

// Seeded random potentials: corrections h = amplitude * smoothed max of
// random affine functions (log-sum-exp mollifier), projected back into the
// strictly convex cone when the amplitude is negative, optionally rescaled
// toward a d_1 target and E-normalized.

#include "wkl/functionals.hpp"
#include "wkl/rng.hpp"

namespace wkl {

struct SampleParams {
  int n_affines = 5;
  double mollifier = 2.0;       // log-sum-exp sharpness, scaled by 1/diam(P)
  double amplitude = 0.25;      // relative to diam(P)^2
  bool allow_concave = true;    // negative amplitudes, projected
  double convexity_margin = 1e-3;
  double d1_target = 0;         // when > 0, rescale so d_1(phi, 0) ~ target
  bool normalize_energy = false;  // shift so E(phi) = 0
};

// Random correction function (before projection/normalization).
SmoothFnPtr random_correction(const Fixture& fx, Rng& rng, const SampleParams& p);

// Random potential as a state over the fixture polytope.
StatePtr random_potential_state(const Fixture& fx, Rng& rng, const SampleParams& p);

// Smallest Hessian eigenvalue of G over the interior quadrature.
double min_convexity(const Fixture& fx, const SmoothFnPtr& h);

// State with the constant shift making E(phi) = 0.
StatePtr energy_normalized(const Fixture& fx, const StatePtr& st);

}  // namespace wkl
