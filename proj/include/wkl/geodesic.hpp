#pragma once

// Psh geodesics between torus-invariant potentials: the segment
// G_t = (1 - t) G_0 + t G_1 of symplectic potentials. Constant d_1 speed and
// affine Monge-Ampere energy are structural; convexity of the relative
// Mabuchi energy along the path is measured.

#include <vector>

#include "wkl/functionals.hpp"

namespace wkl {

struct GeodesicPath {
  StatePtr a, b;
  std::vector<double> times;
  std::vector<StatePtr> samples;
  double length = 0;  // d_1(a, b)
};

GeodesicPath geodesic(const Fixture& fx, const StatePtr& a, const StatePtr& b, int samples);

// State at parameter t of the segment between a and b.
StatePtr geodesic_point(const StatePtr& a, const StatePtr& b, double t);

struct GeodesicDiagnostics {
  double max_energy_affinity_defect = 0;   // sup_t |E(phi_t) - lerp(E)|
  double max_speed_defect_rel = 0;         // constant-speed violation
  double min_second_difference = 0;        // of M^rel along the path
};

GeodesicDiagnostics geodesic_diagnostics(const Fixture& fx, const GeodesicPath& path,
                                         const AffineFunction* ell_ext = nullptr);

}  // namespace wkl
