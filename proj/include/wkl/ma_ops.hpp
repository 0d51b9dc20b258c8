#pragma once

// Pointwise weighted Monge-Ampere calculus on the s-grid of a state:
// MA_v, twisted MA_v^Theta, weighted trace and Laplacian, equivariant Ricci
// data, weighted scalar curvatures, and the soliton residual.
//
// Potentials phi are presented as states: the state carrying Omega_phi is
// the perturbed/translated/lifted KahlerState itself, and the reference
// enters only where a reference measure is required.

#include <vector>

#include "wkl/density.hpp"
#include "wkl/twist.hpp"
#include "wkl/weights.hpp"

namespace wkl {

using GridValues = std::vector<double>;

// Curvature primitives at one state point, assembled in moment coordinates.
// Near a facet {ell = 0} the entries of Hess G blow up like 1/ell while H
// stays bounded; products are grouped so that no intermediate exceeds
// O(1/ell), which keeps fourth-order quantities meaningful in the far grid
// tails (the naive conjugation of Hess F derivative tensors loses them).
struct CurvPoint {
  Vec s;
  Vec x;
  Mat H;        // Hess_s F = (Hess_x G)^{-1}
  Mat Hinv;     // Hess_x G
  double logdetH = 0;
  std::array<Mat, 3> dH;  // d H / d x_c
  Vec g1;       // g1_c = d_c log det Hess G = tr(H G3_c)
  Mat g2;       // g2_ce = d_e g1_c
  Ten3 F3;      // third s-derivative of F, via dH contracted with H
};

CurvPoint curv_point(const SymplecticPotential& g, const Vec& s, const Vec& x);
CurvPoint curv_point_at(const KahlerState& st, int node);

// Jets in s of auxiliary potentials at a state point.
struct PotentialJets {
  double value = 0;
  Vec grad;
  Mat hess;
};

// u = (1/2) log det Hess F.
PotentialJets half_logdet_jets(const CurvPoint& c);
// (1/2) log v(m(s)).
PotentialJets half_logweight_jets(const CurvPoint& c, const Weight& v);

// Normalized density of omega_a ^ omega_b (... n factors) against ds, i.e.
// the mixed discriminant of the s-Hessians. Supported for k = n in {1, 2}.
double mixed_density(const Mat& a, const Mat& b);

// MA(phi) and MA_v(phi): s-density v(m) det Hess F, x-density v(x).
DensityField ma(const StatePtr& phi);
DensityField ma_v(const StatePtr& phi, const WeightPtr& v);

// Theta-twisted, v-weighted operator: s-density
//   [ v(m) tr((Hess F)^{-1} theta) + <v'(m), m_Theta> ] det Hess F.
DensityField ma_twisted(const StatePtr& phi, const WeightPtr& v, const EquivariantTwist& theta);

// tr_{Omega,v}(Theta) = MA_v^Theta / MA_v per node.
GridValues weighted_trace(const StatePtr& phi, const WeightPtr& v, const EquivariantTwist& theta);

// Delta_{Omega,v} f = tr_{Omega,v}(dd^c_T f) per node.
GridValues weighted_laplacian(const StatePtr& phi, const WeightPtr& v, const ScalarField& f);

struct RicciData {
  EquivariantTwist ricci;        // Ric^T(MA_v(phi)) as an exact twist
  std::vector<Vec> moment;       // its moment field at the grid nodes
  double centering_residual = 0; // | int m dnu | / mass(nu), should vanish
};

// Equivariant Ricci form of the measure MA_v(phi) (v omitted: omega_phi^n).
RicciData ricci_data(const StatePtr& phi, const WeightPtr& v = nullptr);

struct CurvatureField {
  StatePtr state;
  GridValues scalar;        // S(omega)
  GridValues weighted;      // S_v
  GridValues weighted_lah;  // S_v^Lah
  GridValues ricci_potential;  // (1/2) log (MA_v(phi)/nu_ref), when ref given
  double lahdili_sup_rel = 0;  // sup |S_v^Lah - v S_v| / (1 + |S_v^Lah|)
};

CurvatureField scalar_curvatures(const StatePtr& phi, const WeightPtr& v,
                                 const StatePtr& reference = nullptr);

// S_v through tr_{Omega,v}(Ric_v^T(Omega)); an independent code path from
// the explicit formula in scalar_curvatures.
GridValues weighted_scalar_via_trace(const StatePtr& phi, const WeightPtr& v);

struct SolitonResidual {
  double scalar_eq = 0;  // sup |S_v - w(m)| with w = soliton_w_of(v, n)
  double ricci_eq = 0;   // sup twist-field residual of Ric_v^T(Omega) - Omega
  double value = 0;      // max of both
};

// Fano-normalized residual test of the weighted soliton equation. The
// polytope must be a translate of the reflexive offsets-one polytope.
SolitonResidual soliton_residual(const StatePtr& phi, const WeightPtr& v);

// Least-squares translation tau with offsets(P + tau) = 1; residual reported.
bool fano_normalization_shift(const Polytope& p, Vec& tau, double* residual = nullptr);

}  // namespace wkl
