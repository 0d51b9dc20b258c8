#include "wkl/geodesic.hpp"

#include <cmath>

namespace wkl {

StatePtr geodesic_point(const StatePtr& a, const StatePtr& b, double t) {
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  SmoothFnPtr ha = a->potential().correction();
  SmoothFnPtr hb = b->potential().correction();
  SmoothFnPtr ht = make_sum({make_scaled(ha, 1.0 - t), make_scaled(hb, t)});
  SymplecticPotential g(a->potential().polytope_ptr(), ht);
  return std::make_shared<KahlerState>(std::move(g), a->grid());
}

GeodesicPath geodesic(const Fixture& fx, const StatePtr& a, const StatePtr& b, int samples) {
  if (!a->polytope().same_combinatorics(b->polytope()))
    throw std::runtime_error("mismatched polytopes");
  GeodesicPath path;
  path.a = a;
  path.b = b;
  path.length = d1(fx, *a, *b).value;
  for (int i = 0; i < samples; ++i) {
    const double t = samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1);
    path.times.push_back(t);
    path.samples.push_back(geodesic_point(a, b, t));
  }
  return path;
}

GeodesicDiagnostics geodesic_diagnostics(const Fixture& fx, const GeodesicPath& path,
                                         const AffineFunction* ell_ext) {
  GeodesicDiagnostics d;
  const size_t n = path.samples.size();
  std::vector<double> e(n), mrel(n);
  AffineFunction ell = ell_ext ? *ell_ext : extremal_function(fx);
  for (size_t i = 0; i < n; ++i) {
    e[i] = energy(fx, *path.samples[i]).value;
    mrel[i] = mabuchi_relative(fx, *path.samples[i], &ell).value;
  }
  const double e0 = e.front(), e1 = e.back();
  for (size_t i = 0; i < n; ++i) {
    const double t = path.times[i];
    d.max_energy_affinity_defect =
        std::max(d.max_energy_affinity_defect, std::fabs(e[i] - ((1 - t) * e0 + t * e1)));
  }
  // constant speed: d_1(phi_s, phi_t) = |t - s| d_1(phi_0, phi_1)
  for (size_t i = 0; i + 1 < n; ++i) {
    const double dt = path.times[i + 1] - path.times[i];
    const double seg = d1(fx, *path.samples[i], *path.samples[i + 1]).value;
    if (path.length > 0)
      d.max_speed_defect_rel =
          std::max(d.max_speed_defect_rel, std::fabs(seg - dt * path.length) / path.length);
  }
  d.min_second_difference = 1e300;
  for (size_t i = 1; i + 1 < n; ++i)
    d.min_second_difference =
        std::min(d.min_second_difference, mrel[i + 1] - 2.0 * mrel[i] + mrel[i - 1]);
  if (n < 3) d.min_second_difference = 0;
  return d;
}

}  // namespace wkl
