#include "wkl/sampling.hpp"

#include <cmath>

namespace wkl {

double min_convexity(const Fixture& fx, const SmoothFnPtr& h) {
  SymplecticPotential g(fx.polytope, h);
  double worst = 1e300;
  Jet4 jet(fx.polytope->dim());
  for (const Vec& x : fx.xquad->nodes) {
    g.eval(x, jet, 2);
    worst = std::min(worst, min_eigenvalue(jet.hess));
  }
  return worst;
}

SmoothFnPtr random_correction(const Fixture& fx, Rng& rng, const SampleParams& p) {
  const int k = fx.polytope->dim();
  const double diam = fx.polytope->diameter();
  const Vec center = fx.polytope->barycenter();

  std::vector<AffineFunction> pieces;
  for (int i = 0; i < p.n_affines; ++i) {
    Vec xi(k);
    for (int d = 0; d < k; ++d) xi[d] = rng.uniform(-1.0, 1.0) * 2.0 / diam;
    const double c = -dot(xi, center) + rng.uniform(-0.25, 0.25);
    pieces.push_back({xi, c});
  }
  double amp = p.amplitude * diam * diam * 0.25;
  if (p.allow_concave && rng.uniform() < 0.5) amp = -amp;
  const double alpha = p.mollifier * 4.0 / diam;
  return std::make_shared<LogSumExpFn>(amp, alpha, pieces);
}

StatePtr random_potential_state(const Fixture& fx, Rng& rng, const SampleParams& p) {
  SmoothFnPtr h = random_correction(fx, rng, p);

  // Project into the admissible cone: shrink until strictly convex with the
  // requested margin.
  for (int attempt = 0; attempt < 60; ++attempt) {
    if (min_convexity(fx, h) >= p.convexity_margin) break;
    const auto* lse = dynamic_cast<const LogSumExpFn*>(h.get());
    h = std::make_shared<LogSumExpFn>(0.6 * lse->amplitude(), lse->alpha(), lse->pieces());
  }

  StatePtr st = std::make_shared<KahlerState>(
      SymplecticPotential(fx.polytope, h), fx.sgrid);

  if (p.d1_target > 0) {
    const double have = d1(fx, *st, *fx.reference).value;
    if (have > 1e-12) {
      const double scale = std::min(1.0, p.d1_target / have);
      const auto* lse = dynamic_cast<const LogSumExpFn*>(h.get());
      SmoothFnPtr hs =
          std::make_shared<LogSumExpFn>(scale * lse->amplitude(), lse->alpha(), lse->pieces());
      if (min_convexity(fx, hs) >= 0.5 * p.convexity_margin)
        st = std::make_shared<KahlerState>(SymplecticPotential(fx.polytope, hs), fx.sgrid);
    }
  }
  if (p.normalize_energy) st = energy_normalized(fx, st);
  return st;
}

StatePtr energy_normalized(const Fixture& fx, const StatePtr& st) {
  const double e = energy(fx, *st).value;
  const double vol = fx.polytope->volume();
  const double c = e / vol;  // G -> G + c lowers E by c * V
  if (std::fabs(c) < 1e-15) return st;
  SymplecticPotential g = st->potential().with_affine(Vec(st->dim()), c);
  return std::make_shared<KahlerState>(std::move(g), st->grid());
}

}  // namespace wkl
