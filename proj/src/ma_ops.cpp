#include "wkl/ma_ops.hpp"

#include <cmath>

namespace wkl {

CurvPoint curv_point(const SymplecticPotential& g, const Vec& s, const Vec& x) {
  const int k = g.dim();
  Jet4 gj(k);
  g.eval(x, gj, 4);
  CurvPoint c;
  c.s = s;
  c.x = x;
  c.Hinv = gj.hess;
  c.H = inverse(gj.hess);
  c.logdetH = -logdet_spd(gj.hess);
  // dH[e] = -H G3_e H, with G3_e = dHess G / d x_e.
  std::array<Mat, 3> g3;
  for (int e = 0; e < k; ++e) {
    g3[static_cast<size_t>(e)] = Mat(k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) g3[static_cast<size_t>(e)](i, j) = gj.d3(i, j, e);
  }
  for (int e = 0; e < k; ++e) {
    Mat m = mul(mul(c.H, g3[static_cast<size_t>(e)]), c.H);
    m *= -1.0;
    c.dH[static_cast<size_t>(e)] = m;
  }
  // g1_c = tr(H G3_c); g2_ce = tr(dH[e] G3_c) + tr(H G4_ce).
  c.g1 = Vec(k);
  c.g2 = Mat(k);
  for (int ci = 0; ci < k; ++ci) c.g1[ci] = trace(mul(c.H, g3[static_cast<size_t>(ci)]));
  for (int ci = 0; ci < k; ++ci)
    for (int e = 0; e < k; ++e) {
      double t = trace(mul(c.dH[static_cast<size_t>(e)], g3[static_cast<size_t>(ci)]));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) t += c.H(i, j) * gj.d4(i, j, ci, e);
      c.g2(ci, e) = t;
    }
  // F3_{abc} = sum_e dH[e]_{ab} H_{ec}.
  c.F3 = Ten3(k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int ci = 0; ci < k; ++ci) {
        double t = 0;
        for (int e = 0; e < k; ++e) t += c.dH[static_cast<size_t>(e)](a, b) * c.H(e, ci);
        c.F3(a, b, ci) = t;
      }
  return c;
}

CurvPoint curv_point_at(const KahlerState& st, int node) {
  return curv_point(st.potential(), st.s_of(node), st.x_of(node));
}

PotentialJets half_logdet_jets(const CurvPoint& c) {
  const int k = c.x.n;
  PotentialJets out{0.5 * c.logdetH, Vec(k), Mat(k)};
  // u = -(1/2) log det Hess G along the moment map.
  out.grad = -0.5 * mul(c.H, c.g1);
  Mat hgh = mul(mul(c.H, c.g2), c.H);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      double f3 = 0;
      for (int ci = 0; ci < k; ++ci) f3 += c.F3(a, b, ci) * c.g1[ci];
      out.hess(a, b) = -0.5 * (f3 + 0.5 * (hgh(a, b) + hgh(b, a)));
    }
  return out;
}

PotentialJets half_logweight_jets(const CurvPoint& c, const Weight& v) {
  const int k = c.x.n;
  WeightJet wj;
  v.eval(c.x, wj);
  if (!(wj.value > 0)) throw std::runtime_error("weight not positive at a grid node");
  PotentialJets out{0.5 * std::log(wj.value), Vec(k), Mat(k)};
  Vec ell = (1.0 / wj.value) * wj.grad;  // (log v)'
  Mat lh = (1.0 / wj.value) * wj.hess;   // (log v)'' = v''/v - ell ell^T
  lh -= outer(ell, ell);
  out.grad = 0.5 * mul(c.H, ell);
  Mat hll = mul(mul(c.H, lh), c.H);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      double f3 = 0;
      for (int ci = 0; ci < k; ++ci) f3 += c.F3(a, b, ci) * ell[ci];
      out.hess(a, b) = 0.5 * (f3 + hll(a, b));
    }
  return out;
}

double mixed_density(const Mat& a, const Mat& b) {
  if (a.n == 1) throw std::runtime_error("mixed density needs two distinct factors only for k >= 2");
  if (a.n == 2)
    return 0.5 * (a(0, 0) * b(1, 1) + b(0, 0) * a(1, 1) - 2.0 * a(0, 1) * b(0, 1));
  throw std::runtime_error("mixed density implemented for k <= 2");
}

IntegralResult integrate_s(const KahlerState& st, const std::vector<double>& values) {
  IntegralResult r;
  double outer_shell = 0, next_shell = 0;
  for (int i = 0; i < st.node_count(); ++i) {
    const double c = st.quad_weight(i) * values[static_cast<size_t>(i)];
    r.value += c;
    if (st.is_boundary_node(i)) outer_shell += std::fabs(c);
    else if (st.is_next_boundary_node(i)) next_shell += std::fabs(c);
  }
  double ratio = next_shell > 0 ? outer_shell / next_shell : 0.0;
  ratio = std::min(ratio, 0.9);
  r.tail = next_shell > 0 ? outer_shell * ratio / (1.0 - ratio) + outer_shell : outer_shell;
  return r;
}

IntegralResult integrate_against(const DensityField& mu, const std::vector<double>& f_values) {
  std::vector<double> prod(mu.s_density.size());
  for (size_t i = 0; i < prod.size(); ++i) prod[i] = mu.s_density[i] * f_values[i];
  return integrate_s(*mu.state, prod);
}

DensityField ma(const StatePtr& phi) {
  DensityField d;
  d.state = phi;
  d.s_density.resize(static_cast<size_t>(phi->node_count()));
  for (int i = 0; i < phi->node_count(); ++i)
    d.s_density[static_cast<size_t>(i)] = std::exp(phi->jet_at(i, 2).logdetH);
  IntegralResult r = integrate_s(*phi, d.s_density);
  d.mass_s = r.value;
  d.tail_estimate = r.tail;
  auto q = std::make_shared<QuadratureRule>(phi->polytope().interior_quadrature());
  d.x_density.assign(q->nodes.size(), 1.0);
  d.mass_x = q->total_weight();
  d.x_quad = std::move(q);
  return d;
}

DensityField ma_v(const StatePtr& phi, const WeightPtr& v) {
  DensityField d;
  d.state = phi;
  d.s_density.resize(static_cast<size_t>(phi->node_count()));
  bool nonneg = true;
  for (int i = 0; i < phi->node_count(); ++i) {
    const StateJet j = phi->jet_at(i, 2);
    const double vv = v->value(j.x);
    if (vv < 0) nonneg = false;
    d.s_density[static_cast<size_t>(i)] = vv * std::exp(j.logdetH);
  }
  d.nonnegative = nonneg;
  IntegralResult r = integrate_s(*phi, d.s_density);
  d.mass_s = r.value;
  d.tail_estimate = r.tail;
  auto q = std::make_shared<QuadratureRule>(phi->polytope().interior_quadrature());
  d.x_density.resize(q->nodes.size());
  d.mass_x = 0;
  for (size_t i = 0; i < q->nodes.size(); ++i) {
    d.x_density[i] = v->value(q->nodes[i]);
    d.mass_x += q->weights[i] * d.x_density[i];
  }
  d.x_quad = std::move(q);
  return d;
}

DensityField ma_twisted(const StatePtr& phi, const WeightPtr& v, const EquivariantTwist& theta) {
  DensityField d;
  d.state = phi;
  d.nonnegative = false;
  d.s_density.resize(static_cast<size_t>(phi->node_count()));
  for (int i = 0; i < phi->node_count(); ++i) {
    const StateJet j = phi->jet_at(i, 2);
    const TwistEval te = theta.at(j.s);
    WeightJet wj;
    v->eval(j.x, wj);
    const double tr_part = trace(mul(j.Hinv, te.theta));
    d.s_density[static_cast<size_t>(i)] =
        (wj.value * tr_part + dot(wj.grad, te.moment)) * std::exp(j.logdetH);
  }
  IntegralResult r = integrate_s(*phi, d.s_density);
  d.mass_s = r.value;
  d.tail_estimate = r.tail;
  return d;
}

GridValues weighted_trace(const StatePtr& phi, const WeightPtr& v, const EquivariantTwist& theta) {
  GridValues out(static_cast<size_t>(phi->node_count()));
  for (int i = 0; i < phi->node_count(); ++i) {
    const StateJet j = phi->jet_at(i, 2);
    const TwistEval te = theta.at(j.s);
    WeightJet wj;
    v->eval(j.x, wj);
    if (!(wj.value > 0)) throw std::runtime_error("division by vanishing density");
    out[static_cast<size_t>(i)] =
        trace(mul(j.Hinv, te.theta)) + dot(wj.grad, te.moment) / wj.value;
  }
  return out;
}

GridValues weighted_laplacian(const StatePtr& phi, const WeightPtr& v, const ScalarField& f) {
  GridValues out(static_cast<size_t>(phi->node_count()));
  for (int i = 0; i < phi->node_count(); ++i) {
    const StateJet j = phi->jet_at(i, 2);
    const SJet2 fj = f.jet_s(j.s);
    WeightJet wj;
    v->eval(j.x, wj);
    if (!(wj.value > 0)) throw std::runtime_error("division by vanishing density");
    out[static_cast<size_t>(i)] =
        trace(mul(j.Hinv, fj.hess)) + dot(wj.grad, fj.grad) / wj.value;
  }
  return out;
}

RicciData ricci_data(const StatePtr& phi, const WeightPtr& v) {
  RicciData out;
  out.ricci = EquivariantTwist::exact(scale_field(make_ricci_potential(phi, v), -1.0));
  out.moment.reserve(static_cast<size_t>(phi->node_count()));
  std::vector<double> mass_int(static_cast<size_t>(phi->node_count()));
  std::vector<std::vector<double>> mom_int(
      static_cast<size_t>(phi->dim()),
      std::vector<double>(static_cast<size_t>(phi->node_count())));
  for (int i = 0; i < phi->node_count(); ++i) {
    const CurvPoint c = curv_point_at(*phi, i);
    Vec m = half_logdet_jets(c).grad;
    if (v) m += half_logweight_jets(c, *v).grad;
    m *= -1.0;
    out.moment.push_back(m);
    const double dens = (v ? v->value(c.x) : 1.0) * std::exp(c.logdetH);
    mass_int[static_cast<size_t>(i)] = dens;
    for (int d = 0; d < phi->dim(); ++d) mom_int[static_cast<size_t>(d)][static_cast<size_t>(i)] = m[d] * dens;
  }
  const double mass = integrate_s(*phi, mass_int).value;
  double worst = 0;
  for (int d = 0; d < phi->dim(); ++d)
    worst = std::max(worst, std::fabs(integrate_s(*phi, mom_int[static_cast<size_t>(d)]).value));
  out.centering_residual = worst / mass;
  return out;
}

CurvatureField scalar_curvatures(const StatePtr& phi, const WeightPtr& v, const StatePtr& reference) {
  check_positive_on(*v, phi->polytope());
  CurvatureField out;
  out.state = phi;
  const int n = phi->node_count();
  out.scalar.resize(static_cast<size_t>(n));
  out.weighted.resize(static_cast<size_t>(n));
  out.weighted_lah.resize(static_cast<size_t>(n));
  if (reference) out.ricci_potential.resize(static_cast<size_t>(n));
  double sup = 0;
  for (int i = 0; i < n; ++i) {
    const CurvPoint c = curv_point_at(*phi, i);
    WeightJet wj;
    v->eval(c.x, wj);
    if (!(wj.value > 0)) throw std::runtime_error("weight not positive at a grid node");

    // S = (1/2)[tr(g2 H) - g1^T H g1]; reduces to -W''/2 in one dimension.
    const double S = 0.5 * (trace(mul(c.g2, c.H)) - dot(c.g1, mul(c.H, c.g1)));
    const Vec lap_m = -1.0 * mul(c.H, c.g1);  // Delta_omega m = grad_s log det Hess F
    const double lap_v = dot(wj.grad, lap_m) + trace(mul(wj.hess, c.H));
    const double S_v = S - (dot(wj.grad, lap_m) + lap_v) / (2.0 * wj.value);
    const double S_lah = wj.value * S - lap_v + 0.5 * trace(mul(wj.hess, c.H));

    out.scalar[static_cast<size_t>(i)] = S;
    out.weighted[static_cast<size_t>(i)] = S_v;
    out.weighted_lah[static_cast<size_t>(i)] = S_lah;
    sup = std::max(sup, std::fabs(S_lah - wj.value * S_v) / (1.0 + std::fabs(S_lah)));

    if (reference) {
      const StateJet jr = reference->jet_at(i, 2);
      out.ricci_potential[static_cast<size_t>(i)] =
          0.5 * (std::log(wj.value) + c.logdetH - jr.logdetH);
    }
  }
  out.lahdili_sup_rel = sup;
  return out;
}

GridValues weighted_scalar_via_trace(const StatePtr& phi, const WeightPtr& v) {
  GridValues out(static_cast<size_t>(phi->node_count()));
  for (int i = 0; i < phi->node_count(); ++i) {
    const CurvPoint c = curv_point_at(*phi, i);
    const PotentialJets u = half_logdet_jets(c);
    const PotentialJets lw = half_logweight_jets(c, *v);
    // rho_v = u + (1/2) log v(m); Ric_v = -dd^c_T rho_v.
    const Vec rg = u.grad + lw.grad;
    const Mat rh = u.hess + lw.hess;
    WeightJet wj;
    v->eval(c.x, wj);
    const Vec ell = (1.0 / wj.value) * wj.grad;
    out[static_cast<size_t>(i)] = -(trace(mul(c.Hinv, rh)) + dot(ell, rg));
  }
  return out;
}

bool fano_normalization_shift(const Polytope& p, Vec& tau, double* residual) {
  // lambda_i - 1 = -<tau, u_i> in least squares.
  const int k = p.dim();
  Mat ata(k);
  Vec atb(k);
  for (const Facet& f : p.facets()) {
    const double b = 1.0 - f.offset;  // want <tau, u_i> = 1 - lambda_i
    for (int a = 0; a < k; ++a) {
      atb[a] += f.normal[a] * b;
      for (int c = 0; c < k; ++c) ata(a, c) += f.normal[a] * f.normal[c];
    }
  }
  tau = solve_spd(ata, atb);
  double worst = 0;
  for (const Facet& f : p.facets())
    worst = std::max(worst, std::fabs(f.offset + dot(tau, f.normal) - 1.0));
  if (residual) *residual = worst;
  return worst <= 1e-8;
}

SolitonResidual soliton_residual(const StatePtr& phi, const WeightPtr& v) {
  Vec tau;
  double resid = 0;
  if (!fano_normalization_shift(phi->polytope(), tau, &resid))
    throw std::runtime_error("non-Fano normalization");

  const int k = phi->dim();
  const WeightPtr w = soliton_w_of(v, k);

  SolitonResidual out;
  for (int i = 0; i < phi->node_count(); ++i) {
    const CurvPoint c = curv_point_at(*phi, i);
    const PotentialJets u = half_logdet_jets(c);
    const PotentialJets lw = half_logweight_jets(c, *v);
    const Vec rho_g = u.grad + lw.grad;
    const Mat rho_h = u.hess + lw.hess;

    // Ricci equation residual: -dd^c rho_v = Omega and -grad rho_v = m.
    double form = 0;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) form = std::max(form, std::fabs(-rho_h(a, b) - c.H(a, b)));
    double mom = 0;
    for (int a = 0; a < k; ++a) mom = std::max(mom, std::fabs(-rho_g[a] - c.x[a]));
    out.ricci_eq = std::max(out.ricci_eq, std::max(form, mom));

    // Scalar equation residual against the companion weight.
    WeightJet wj;
    v->eval(c.x, wj);
    const double S = 0.5 * (trace(mul(c.g2, c.H)) - dot(c.g1, mul(c.H, c.g1)));
    const Vec lap_m = -1.0 * mul(c.H, c.g1);
    const double lap_v = dot(wj.grad, lap_m) + trace(mul(wj.hess, c.H));
    const double S_v = S - (dot(wj.grad, lap_m) + lap_v) / (2.0 * wj.value);
    out.scalar_eq = std::max(out.scalar_eq, std::fabs(S_v - w->value(c.x)));
  }
  out.value = std::max(out.scalar_eq, out.ricci_eq);
  return out;
}

}  // namespace wkl
