#include "wkl/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "wkl/fields.hpp"

namespace wkl {

namespace {

std::vector<double> symplectic_values(const Fixture& fx, const KahlerState& st) {
  std::vector<double> g(fx.xquad->nodes.size());
  for (size_t i = 0; i < g.size(); ++i) g[i] = st.potential().value(fx.xquad->nodes[i]);
  return g;
}

double xintegral(const Fixture& fx, const std::vector<double>& vals) {
  double s = 0;
  for (size_t i = 0; i < vals.size(); ++i) s += fx.xquad->weights[i] * vals[i];
  return s;
}

// Gauss-Legendre nodes for the line-segment quadrature in equ-style
// difference formulas (smooth integrands in t).
void segment_rule(int order, std::vector<double>& t, std::vector<double>& w) {
  gauss_legendre(order, t, w);
  for (size_t i = 0; i < t.size(); ++i) {
    t[i] = 0.5 * (t[i] + 1.0);
    w[i] *= 0.5;
  }
}

}  // namespace

Fixture make_fixture(std::string name, std::shared_ptr<const Polytope> p, WeightPtr v,
                     WeightPtr w, const SGridSpec& grid, int quad_order) {
  Fixture fx;
  fx.name = std::move(name);
  fx.polytope = std::move(p);
  fx.reference = guillemin_state(fx.polytope, grid);
  fx.v = std::move(v);
  fx.w = std::move(w);
  fx.xquad = std::make_shared<QuadratureRule>(fx.polytope->interior_quadrature(quad_order));
  fx.sgrid = grid;
  return fx;
}

FunctionalReport energy(const Fixture& fx, const KahlerState& phi, bool cross_check) {
  FunctionalReport rep;
  rep.name = "energy";
  rep.path = "x-grid";
  std::vector<double> gphi = symplectic_values(fx, phi);
  std::vector<double> gref = symplectic_values(fx, *fx.reference);
  double val = 0;
  for (size_t i = 0; i < gphi.size(); ++i)
    val -= fx.xquad->weights[i] * (gphi[i] - gref[i]);
  rep.value = val;

  if (cross_check) {
    // E(phi) = 1/(n+1) sum_p int phi omega_phi^p wedge omega^(n-p)
    const KahlerState& ref = *fx.reference;
    const int k = phi.dim();
    std::vector<double> integrand(static_cast<size_t>(phi.node_count()));
    for (int i = 0; i < phi.node_count(); ++i) {
      const StateJet ja = phi.jet_at(i, 2);
      const StateJet jr = ref.jet_at(i, 2);
      const double f = ja.F - jr.F;
      double mixsum = 0;
      if (k == 1) {
        mixsum = ja.H(0, 0) + jr.H(0, 0);
      } else {
        mixsum = det(ja.H) + mixed_density(ja.H, jr.H) + det(jr.H);
      }
      integrand[static_cast<size_t>(i)] = f * mixsum / (k + 1.0);
    }
    IntegralResult r = integrate_s(phi, integrand);
    rep.path = "both";
    rep.discrepancy = std::fabs(r.value - rep.value);
    rep.tail = r.tail;
    rep.flagged = rep.discrepancy > 1e-6 * (1.0 + std::fabs(rep.value)) + 4.0 * r.tail;
  }
  return rep;
}

FunctionalReport weighted_energy(const Fixture& fx, const KahlerState& phi, const Weight& g,
                                 bool cross_check) {
  FunctionalReport rep;
  rep.name = "weighted_energy[" + g.name() + "]";
  rep.path = "x-grid";
  std::vector<double> gphi = symplectic_values(fx, phi);
  std::vector<double> gref = symplectic_values(fx, *fx.reference);
  double val = 0;
  for (size_t i = 0; i < gphi.size(); ++i)
    val -= fx.xquad->weights[i] * g.value(fx.xquad->nodes[i]) * (gphi[i] - gref[i]);
  rep.value = val;

  if (cross_check) {
    // int_0^1 dt int phi MA_g(t phi): the segment states have moment
    // x_t = (1-t) x_0 + t x_phi and Hessian (1-t) H_0 + t H_phi.
    const KahlerState& ref = *fx.reference;
    std::vector<double> ts, ws;
    segment_rule(16, ts, ws);
    std::vector<double> integrand(static_cast<size_t>(phi.node_count()), 0.0);
    for (int i = 0; i < phi.node_count(); ++i) {
      const StateJet ja = phi.jet_at(i, 2);
      const StateJet jr = ref.jet_at(i, 2);
      const double f = ja.F - jr.F;
      double acc = 0;
      for (size_t q = 0; q < ts.size(); ++q) {
        const double t = ts[q];
        Vec xt = (1.0 - t) * jr.x + t * ja.x;
        Mat ht = (1.0 - t) * jr.H + t * ja.H;
        acc += ws[q] * g.value(xt) * det(ht);
      }
      integrand[static_cast<size_t>(i)] = f * acc;
    }
    IntegralResult r = integrate_s(phi, integrand);
    rep.path = "both";
    rep.discrepancy = std::fabs(r.value - rep.value);
    rep.tail = r.tail;
    rep.flagged = rep.discrepancy > 1e-6 * (1.0 + std::fabs(rep.value)) + 4.0 * r.tail;
  }
  return rep;
}

FunctionalReport twisted_energy(const Fixture& fx, const KahlerState& phi, const Weight& v,
                                const EquivariantTwist& theta, bool cross_check) {
  FunctionalReport rep;
  rep.name = "twisted_energy";
  const KahlerState& ref = *fx.reference;
  const int k = phi.dim();

  const bool exact_kind = theta.kind() != TwistKind::state_form;
  double exact_value = 0, exact_tail = 0;
  if (exact_kind) {
    // int f (MA_v(phi) - MA_v(0)) for Theta = dd^c_T f.
    std::vector<double> integrand(static_cast<size_t>(phi.node_count()));
    for (int i = 0; i < phi.node_count(); ++i) {
      const StateJet ja = phi.jet_at(i, 2);
      const StateJet jr = ref.jet_at(i, 2);
      const double f = theta.payload()->value_s(ja.s);
      integrand[static_cast<size_t>(i)] =
          f * (v.value(ja.x) * std::exp(ja.logdetH) - v.value(jr.x) * std::exp(jr.logdetH));
    }
    IntegralResult r = integrate_s(phi, integrand);
    exact_value = r.value;
    exact_tail = r.tail;
  }

  double seg_value = 0, seg_tail = 0;
  if (!exact_kind || cross_check) {
    // int_0^1 dt int phi MA_v^Theta(t phi).
    std::vector<double> ts, ws;
    segment_rule(16, ts, ws);
    std::vector<double> integrand(static_cast<size_t>(phi.node_count()));
    for (int i = 0; i < phi.node_count(); ++i) {
      const StateJet ja = phi.jet_at(i, 2);
      const StateJet jr = ref.jet_at(i, 2);
      const TwistEval te = theta.at(ja.s);
      const double f = ja.F - jr.F;
      double acc = 0;
      for (size_t q = 0; q < ts.size(); ++q) {
        const double t = ts[q];
        Vec xt = (1.0 - t) * jr.x + t * ja.x;
        Mat ht = (1.0 - t) * jr.H + t * ja.H;
        WeightJet wj;
        v.eval(xt, wj);
        const Mat hinv = inverse(ht);
        const double dens =
            (wj.value * trace(mul(hinv, te.theta)) + dot(wj.grad, te.moment)) * det(ht);
        acc += ws[q] * dens;
      }
      integrand[static_cast<size_t>(i)] = f * acc;
    }
    IntegralResult r = integrate_s(phi, integrand);
    seg_value = r.value;
    seg_tail = r.tail;
  }

  if (exact_kind) {
    rep.value = exact_value;
    rep.tail = exact_tail;
    rep.path = cross_check ? "both" : "s-grid";
    if (cross_check) {
      rep.discrepancy = std::fabs(exact_value - seg_value);
      rep.flagged =
          rep.discrepancy > 1e-6 * (1.0 + std::fabs(rep.value)) + 4.0 * (exact_tail + seg_tail);
    }
  } else {
    rep.value = seg_value;
    rep.tail = seg_tail;
    rep.path = "s-grid";
  }
  (void)k;
  return rep;
}

double ricci_energy(const Fixture& fx, const KahlerState& phi, const WeightPtr& v) {
  EquivariantTwist ric = EquivariantTwist::ricci_of_reference(fx.reference);
  // R_v = E_v^{-Ric^T(nu_X)} and -Ric^T(nu_X) = dd^c_T rho_0.
  return twisted_energy(fx, phi, *v, ric, false).value;
}

std::vector<double> rooftop_envelope(const Fixture& fx, const KahlerState& a, const KahlerState& b) {
  std::vector<double> ga = symplectic_values(fx, a);
  std::vector<double> gb = symplectic_values(fx, b);
  for (size_t i = 0; i < ga.size(); ++i) ga[i] = std::max(ga[i], gb[i]);
  return ga;
}

D1Report d1(const Fixture& fx, const KahlerState& a, const KahlerState& b) {
  if (!a.polytope().same_combinatorics(b.polytope()))
    throw std::runtime_error("mismatched polytopes");
  std::vector<double> ga = symplectic_values(fx, a);
  std::vector<double> gb = symplectic_values(fx, b);
  std::vector<double> gref = symplectic_values(fx, *fx.reference);
  double ea = 0, eb = 0, eenv = 0, l1 = 0;
  for (size_t i = 0; i < ga.size(); ++i) {
    const double w = fx.xquad->weights[i];
    ea -= w * (ga[i] - gref[i]);
    eb -= w * (gb[i] - gref[i]);
    eenv -= w * (std::max(ga[i], gb[i]) - gref[i]);
    l1 += w * std::fabs(ga[i] - gb[i]);
  }
  D1Report rep;
  rep.value = ea + eb - 2.0 * eenv;
  rep.l1 = l1;
  rep.discrepancy = std::fabs(rep.value - rep.l1);
  return rep;
}

IJReport i_j_i1(const Fixture& fx, const KahlerState& a, const KahlerState& b) {
  IJReport rep;
  const int n = a.node_count();
  std::vector<double> ii(static_cast<size_t>(n)), i1(static_cast<size_t>(n)),
      ja(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const StateJet sa = a.jet_at(i, 2);
    const StateJet sb = b.jet_at(i, 2);
    const StateJet sr = fx.reference->jet_at(i, 2);
    const double diff = sa.F - sb.F;
    const double da = std::exp(sa.logdetH), db = std::exp(sb.logdetH);
    ii[static_cast<size_t>(i)] = diff * (db - da);
    i1[static_cast<size_t>(i)] = std::fabs(diff) * (da + db);
    ja[static_cast<size_t>(i)] = (sa.F - sr.F) * std::exp(sr.logdetH);
  }
  IntegralResult ri = integrate_s(a, ii);
  IntegralResult r1 = integrate_s(a, i1);
  IntegralResult rj = integrate_s(a, ja);
  rep.I = ri.value;
  rep.I1 = r1.value;
  rep.J_a = rj.value - energy(fx, a).value;
  rep.tail = ri.tail + r1.tail + rj.tail;
  return rep;
}

double sup_difference(const Fixture& fx, const KahlerState& a, const KahlerState& b) {
  // sup_s (F_a - F_b) equals sup_P (G_b - G_a) for potentials over one
  // polytope; evaluate on the quadrature nodes and the s-grid and take the
  // larger sample.
  double sup = -1e300;
  for (size_t i = 0; i < fx.xquad->nodes.size(); ++i)
    sup = std::max(sup, b.potential().value(fx.xquad->nodes[i]) -
                            a.potential().value(fx.xquad->nodes[i]));
  for (int i = 0; i < a.node_count(); ++i) sup = std::max(sup, a.f_of(i) - b.f_of(i));
  return sup;
}

double mean_difference(const Fixture& fx, const KahlerState& a, const KahlerState& b) {
  std::vector<double> vals(static_cast<size_t>(a.node_count()));
  for (int i = 0; i < a.node_count(); ++i) {
    const StateJet sr = fx.reference->jet_at(i, 2);
    vals[static_cast<size_t>(i)] = (a.f_of(i) - b.f_of(i)) * std::exp(sr.logdetH);
  }
  return integrate_s(a, vals).value;
}

double relative_entropy(const DensityField& mu, const DensityField& nu) {
  if (mu.s_density.size() != nu.s_density.size())
    throw std::runtime_error("entropy: measures on different grids");
  std::vector<double> vals(mu.s_density.size(), 0.0);
  for (size_t i = 0; i < vals.size(); ++i) {
    const double m = mu.s_density[i];
    if (m == 0.0) continue;
    if (m < 0.0) throw std::runtime_error("entropy of a signed measure");
    const double d = nu.s_density[i];
    if (!(d > 0.0)) throw std::runtime_error("measure not dominated by the reference");
    vals[i] = m * std::log(m / d);
  }
  return integrate_s(*mu.state, vals).value;
}

EntropyReport weighted_entropy(const Fixture& fx, const KahlerState& phi, const WeightPtr& v) {
  EntropyReport rep;
  const KahlerState& ref = *fx.reference;

  // x-grid path: substitute s = grad G_phi(x); log det Hess F_phi(s(x)) =
  // -log det Hess G_phi(x); the reference density at the matched base point
  // comes from the reference transform at the same s.
  double xval = 0;
  for (size_t i = 0; i < fx.xquad->nodes.size(); ++i) {
    const Vec& x = fx.xquad->nodes[i];
    Jet4 gj(phi.dim());
    phi.potential().eval(x, gj, 2);
    const Vec s = gj.grad;
    const double logdet_phi = -logdet_spd(gj.hess);
    const StateJet jr = ref.jet_at_s(s, 2);
    const double vv = v->value(x);
    xval += fx.xquad->weights[i] * vv * (std::log(vv) + logdet_phi - jr.logdetH);
  }
  rep.x_path = 0.5 * xval;

  // s-grid oracle.
  std::vector<double> vals(static_cast<size_t>(phi.node_count()));
  for (int i = 0; i < phi.node_count(); ++i) {
    const StateJet ja = phi.jet_at(i, 2);
    const StateJet jr = ref.jet_at(i, 2);
    const double vv = v->value(ja.x);
    const double dens = vv * std::exp(ja.logdetH);
    vals[static_cast<size_t>(i)] = dens * (std::log(vv) + ja.logdetH - jr.logdetH);
  }
  IntegralResult rs = integrate_s(phi, vals);
  rep.s_path = 0.5 * rs.value;
  rep.tail = rs.tail;
  rep.value = rep.x_path;
  rep.discrepancy = std::fabs(rep.x_path - rep.s_path);
  return rep;
}

FunctionalReport dh_integral(const Fixture& fx, const Weight& g) {
  FunctionalReport rep;
  rep.name = "dh_integral[" + g.name() + "]";
  rep.path = "both";
  double xval = 0;
  for (size_t i = 0; i < fx.xquad->nodes.size(); ++i)
    xval += fx.xquad->weights[i] * g.value(fx.xquad->nodes[i]);
  rep.value = xval;
  std::vector<double> vals(static_cast<size_t>(fx.reference->node_count()));
  for (int i = 0; i < fx.reference->node_count(); ++i) {
    const StateJet j = fx.reference->jet_at(i, 2);
    vals[static_cast<size_t>(i)] = g.value(j.x) * std::exp(j.logdetH);
  }
  IntegralResult rs = integrate_s(*fx.reference, vals);
  rep.discrepancy = std::fabs(rs.value - xval);
  rep.tail = rs.tail;
  return rep;
}

namespace {

Histogram empty_histogram(const Fixture& fx, int bins) {
  Histogram h;
  h.bins_per_dim = bins;
  const int k = fx.polytope->dim();
  h.lo = Vec(k);
  h.hi = Vec(k);
  for (int d = 0; d < k; ++d) {
    h.lo[d] = 1e300;
    h.hi[d] = -1e300;
  }
  for (const Vec& v : fx.polytope->vertices())
    for (int d = 0; d < k; ++d) {
      h.lo[d] = std::min(h.lo[d], v[d]);
      h.hi[d] = std::max(h.hi[d], v[d]);
    }
  int cells = 1;
  for (int d = 0; d < k; ++d) cells *= bins;
  h.mass.assign(static_cast<size_t>(cells), 0.0);
  h.centers.resize(static_cast<size_t>(cells), Vec(k));
  for (int c = 0; c < cells; ++c) {
    int rem = c;
    for (int d = 0; d < k; ++d) {
      const int id = rem % bins;
      rem /= bins;
      h.centers[static_cast<size_t>(c)][d] =
          h.lo[d] + (h.hi[d] - h.lo[d]) * (id + 0.5) / bins;
    }
  }
  return h;
}

int cell_of(const Histogram& h, const Vec& x, int k) {
  int cell = 0, stride = 1;
  for (int d = 0; d < k; ++d) {
    double t = (x[d] - h.lo[d]) / (h.hi[d] - h.lo[d]);
    int id = static_cast<int>(t * h.bins_per_dim);
    id = std::clamp(id, 0, h.bins_per_dim - 1);
    cell += stride * id;
    stride *= h.bins_per_dim;
  }
  return cell;
}

}  // namespace

Histogram dh_pushforward(const Fixture& fx, const KahlerState& phi, int bins) {
  Histogram h = empty_histogram(fx, bins);
  const int k = fx.polytope->dim();
  for (int i = 0; i < phi.node_count(); ++i) {
    const StateJet j = phi.jet_at(i, 2);
    h.mass[static_cast<size_t>(cell_of(h, j.x, k))] += phi.quad_weight(i) * std::exp(j.logdetH);
  }
  return h;
}

Histogram lebesgue_histogram(const Fixture& fx, int bins) {
  Histogram h = empty_histogram(fx, bins);
  const int k = fx.polytope->dim();
  for (size_t i = 0; i < fx.xquad->nodes.size(); ++i)
    h.mass[static_cast<size_t>(cell_of(h, fx.xquad->nodes[i], k))] += fx.xquad->weights[i];
  return h;
}

double w1_distance(const Histogram& a, const Histogram& b) {
  // Min-cost flow of the normalized difference on the 8-neighbor cell graph
  // (successive shortest paths with potentials).
  const int bins = a.bins_per_dim;
  const int k = a.lo.n;
  const int cells = static_cast<int>(a.mass.size());
  double ma = 0, mb = 0;
  for (double m : a.mass) ma += m;
  for (double m : b.mass) mb += m;
  std::vector<double> excess(static_cast<size_t>(cells));
  for (int c = 0; c < cells; ++c)
    excess[static_cast<size_t>(c)] = a.mass[static_cast<size_t>(c)] / ma - b.mass[static_cast<size_t>(c)] / mb;

  // arcs: 8-neighborhood (2-d) or 2k-neighborhood (1-d)
  struct Arc {
    int to;
    double cost;
    double flow = 0;
  };
  std::vector<std::vector<Arc>> adj(static_cast<size_t>(cells));
  auto coords = [&](int c) {
    std::array<int, 3> id{0, 0, 0};
    for (int d = 0; d < k; ++d) {
      id[static_cast<size_t>(d)] = c % bins;
      c /= bins;
    }
    return id;
  };
  for (int c = 0; c < cells; ++c) {
    const auto ic = coords(c);
    std::array<int, 3> off{0, 0, 0};
    const int range = (k == 1) ? 1 : 1;
    for (off[0] = -range; off[0] <= range; ++off[0])
      for (off[1] = (k > 1 ? -range : 0); off[1] <= (k > 1 ? range : 0); ++off[1]) {
        if (off[0] == 0 && off[1] == 0) continue;
        std::array<int, 3> jn = ic;
        bool ok = true;
        for (int d = 0; d < k; ++d) {
          jn[static_cast<size_t>(d)] += off[static_cast<size_t>(d)];
          if (jn[static_cast<size_t>(d)] < 0 || jn[static_cast<size_t>(d)] >= bins) ok = false;
        }
        if (!ok) continue;
        int cn = 0, stride = 1;
        for (int d = 0; d < k; ++d) {
          cn += stride * jn[static_cast<size_t>(d)];
          stride *= bins;
        }
        const double cost = norm2(a.centers[static_cast<size_t>(cn)] - a.centers[static_cast<size_t>(c)]);
        adj[static_cast<size_t>(c)].push_back({cn, cost});
      }
  }

  std::vector<double> pot(static_cast<size_t>(cells), 0.0);
  double total_cost = 0;
  const double eps_mass = 1e-15;
  for (int round = 0; round < 4 * cells; ++round) {
    // find a source with positive excess
    int src = -1;
    for (int c = 0; c < cells; ++c)
      if (excess[static_cast<size_t>(c)] > eps_mass) {
        src = c;
        break;
      }
    if (src < 0) break;
    // Dijkstra with reduced costs from src to the nearest deficit cell.
    std::vector<double> dist(static_cast<size_t>(cells), std::numeric_limits<double>::infinity());
    std::vector<std::pair<int, int>> parent(static_cast<size_t>(cells), {-1, -1});
    using QE = std::pair<double, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
    dist[static_cast<size_t>(src)] = 0;
    pq.push({0.0, src});
    int sink = -1;
    while (!pq.empty()) {
      auto [dcur, u] = pq.top();
      pq.pop();
      if (dcur > dist[static_cast<size_t>(u)] + 1e-18) continue;
      if (excess[static_cast<size_t>(u)] < -eps_mass) {
        sink = u;
        break;
      }
      for (size_t e = 0; e < adj[static_cast<size_t>(u)].size(); ++e) {
        const Arc& arc = adj[static_cast<size_t>(u)][e];
        const double rc = arc.cost + pot[static_cast<size_t>(u)] - pot[static_cast<size_t>(arc.to)];
        const double nd = dist[static_cast<size_t>(u)] + rc;
        if (nd < dist[static_cast<size_t>(arc.to)] - 1e-18) {
          dist[static_cast<size_t>(arc.to)] = nd;
          parent[static_cast<size_t>(arc.to)] = {u, static_cast<int>(e)};
          pq.push({nd, arc.to});
        }
      }
    }
    if (sink < 0) break;
    for (int c = 0; c < cells; ++c)
      if (dist[static_cast<size_t>(c)] < std::numeric_limits<double>::infinity())
        pot[static_cast<size_t>(c)] += dist[static_cast<size_t>(c)];
    // bottleneck
    double amount = std::min(excess[static_cast<size_t>(src)], -excess[static_cast<size_t>(sink)]);
    // push along path; arcs are symmetric so the true path cost is the sum
    double path_cost = 0;
    for (int cur = sink; cur != src;) {
      auto [pu, pe] = parent[static_cast<size_t>(cur)];
      path_cost += adj[static_cast<size_t>(pu)][static_cast<size_t>(pe)].cost;
      cur = pu;
    }
    excess[static_cast<size_t>(src)] -= amount;
    excess[static_cast<size_t>(sink)] += amount;
    total_cost += amount * path_cost;
  }
  return total_cost;
}

PairingMatrix futaki_mabuchi(const Fixture& fx) {
  const int k = fx.polytope->dim();
  check_positive_on(*fx.v, *fx.polytope);
  check_positive_on(*fx.w, *fx.polytope);

  auto ell_of = [&](int i) {
    if (i < k) {
      Vec xi(k);
      xi[i] = 1.0;
      return AffineFunction{xi, 0.0};
    }
    return AffineFunction::constant(k, 1.0);
  };

  PairingMatrix pm;
  pm.gram = Mat(k + 1);
  pm.rhs = Vec(k + 1);
  for (size_t q = 0; q < fx.xquad->nodes.size(); ++q) {
    const Vec& x = fx.xquad->nodes[q];
    const double weight = fx.xquad->weights[q] * fx.v->value(x) * fx.w->value(x);
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= k; ++j) pm.gram(i, j) += weight * ell_of(i)(x) * ell_of(j)(x);
  }

  CurvatureField cf = scalar_curvatures(fx.reference, fx.v);
  for (int i = 0; i <= k; ++i) {
    std::vector<double> vals(static_cast<size_t>(fx.reference->node_count()));
    for (int nidx = 0; nidx < fx.reference->node_count(); ++nidx) {
      const StateJet j = fx.reference->jet_at(nidx, 2);
      vals[static_cast<size_t>(nidx)] = ell_of(i)(j.x) * cf.weighted[static_cast<size_t>(nidx)] *
                                        fx.v->value(j.x) * std::exp(j.logdetH);
    }
    pm.rhs[i] = integrate_s(*fx.reference, vals).value;
  }

  Vec eig = sym_eigenvalues(pm.gram);
  pm.min_eigen = eig[0];
  pm.condition = eig[k] / std::max(eig[0], 1e-300);
  pm.flagged = !(pm.min_eigen > 0.0) || pm.condition > 1e10;
  return pm;
}

AffineFunction extremal_function(const Fixture& fx) {
  PairingMatrix pm = futaki_mabuchi(fx);
  if (!(pm.min_eigen > 0.0)) throw std::runtime_error("futaki-mabuchi pairing not positive definite");
  const int k = fx.polytope->dim();
  Vec sol = solve_spd(pm.gram, pm.rhs);
  Vec xi(k);
  for (int d = 0; d < k; ++d) xi[d] = sol[d];
  return {xi, sol[k]};
}

double futaki_invariant(const Fixture& fx, const AffineFunction& ell) {
  double term1 = 0;
  for (size_t q = 0; q < fx.xquad->nodes.size(); ++q) {
    const Vec& x = fx.xquad->nodes[q];
    term1 += fx.xquad->weights[q] * ell(x) * fx.w->value(x) * fx.v->value(x);
  }
  CurvatureField cf = scalar_curvatures(fx.reference, fx.v);
  std::vector<double> vals(static_cast<size_t>(fx.reference->node_count()));
  for (int i = 0; i < fx.reference->node_count(); ++i) {
    const StateJet j = fx.reference->jet_at(i, 2);
    vals[static_cast<size_t>(i)] =
        ell(j.x) * cf.weighted[static_cast<size_t>(i)] * fx.v->value(j.x) * std::exp(j.logdetH);
  }
  return term1 - integrate_s(*fx.reference, vals).value;
}

MabuchiReport mabuchi(const Fixture& fx, const KahlerState& phi) {
  MabuchiReport rep;
  EntropyReport ent = weighted_entropy(fx, phi, fx.v);
  rep.entropy = ent.value;
  rep.ricci = ricci_energy(fx, phi, fx.v);
  WeightPtr vw = make_product(fx.v, fx.w);
  rep.energy = weighted_energy(fx, phi, *vw).value;
  rep.value = rep.entropy + rep.ricci + rep.energy;
  rep.tail = ent.tail;
  return rep;
}

MabuchiReport mabuchi_relative(const Fixture& fx, const KahlerState& phi,
                               const AffineFunction* ell_ext) {
  AffineFunction ell = ell_ext ? *ell_ext : extremal_function(fx);
  MabuchiReport rep;
  EntropyReport ent = weighted_entropy(fx, phi, fx.v);
  rep.entropy = ent.value;
  rep.ricci = ricci_energy(fx, phi, fx.v);
  WeightPtr vwl = make_product(fx.v, make_product(fx.w, make_affine_weight(ell)));
  rep.energy = weighted_energy(fx, phi, *vwl).value;
  rep.value = rep.entropy + rep.ricci + rep.energy;
  rep.tail = ent.tail;
  return rep;
}

double perturbed_symplectic_value(const KahlerState& base, const ScalarField& f, double eps,
                                  const Vec& x) {
  // maximize <s,x> - F_base(s) - eps f(s) over s, seeded at grad G_base(x).
  const int k = base.dim();
  Jet4 gj(k);
  base.potential().eval(x, gj, 2);
  Vec s = gj.grad;
  for (int iter = 0; iter < 60; ++iter) {
    const StateJet j = detail::state_jet_at(base, s, 2);
    const SJet2 fj = f.jet_s(s);
    Vec grad = x - j.x - eps * fj.grad;
    if (norm_inf(grad) <= 1e-12 * (1.0 + norm_inf(x))) break;
    Mat hess = j.H;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) hess(a, b) += eps * fj.hess(a, b);
    Vec ds = solve_spd(hess, grad);
    s += ds;
    if (norm_inf(ds) <= 1e-14 * (1.0 + norm_inf(s))) break;
  }
  const StateJet j = detail::state_jet_at(base, s, 2);
  return dot(s, x) - j.F - eps * f.value_s(s);
}

double weighted_energy_perturbed(const Fixture& fx, const KahlerState& phi, const Weight& g,
                                 const ScalarField& f, double eps) {
  double val = 0;
  for (size_t i = 0; i < fx.xquad->nodes.size(); ++i) {
    const Vec& x = fx.xquad->nodes[i];
    const double gp = perturbed_symplectic_value(phi, f, eps, x);
    const double gr = fx.reference->potential().value(x);
    val -= fx.xquad->weights[i] * g.value(x) * (gp - gr);
  }
  return val;
}

DensityField ma_v_perturbed(const Fixture& fx, const StatePtr& phi, const WeightPtr& v,
                            const ScalarField& f, double eps) {
  DensityField d;
  d.state = phi;
  d.s_density.resize(static_cast<size_t>(phi->node_count()));
  for (int i = 0; i < phi->node_count(); ++i) {
    const StateJet j = phi->jet_at(i, 2);
    const SJet2 fj = f.jet_s(j.s);
    Vec xt = j.x + eps * fj.grad;
    Mat ht = j.H;
    for (int a = 0; a < phi->dim(); ++a)
      for (int b = 0; b < phi->dim(); ++b) ht(a, b) += eps * fj.hess(a, b);
    d.s_density[static_cast<size_t>(i)] = v->value(xt) * det(ht);
  }
  IntegralResult r = integrate_s(*phi, d.s_density);
  d.mass_s = r.value;
  d.tail_estimate = r.tail;
  (void)fx;
  return d;
}

double entropy_plus_ricci_perturbed(const Fixture& fx, const KahlerState& phi, const WeightPtr& v,
                                    const ScalarField& f, double eps) {
  const KahlerState& ref = *fx.reference;
  std::vector<double> vals(static_cast<size_t>(phi.node_count()));
  std::vector<double> rvals(static_cast<size_t>(phi.node_count()));
  for (int i = 0; i < phi.node_count(); ++i) {
    const StateJet j = phi.jet_at(i, 2);
    const StateJet jr = ref.jet_at(i, 2);
    const SJet2 fj = f.jet_s(j.s);
    Vec xt = j.x + eps * fj.grad;
    Mat ht = j.H;
    for (int a = 0; a < phi.dim(); ++a)
      for (int b = 0; b < phi.dim(); ++b) ht(a, b) += eps * fj.hess(a, b);
    const double vv = v->value(xt);
    const double dens = vv * det(ht);
    const double dens0 = v->value(jr.x) * std::exp(jr.logdetH);
    const double rho0 = 0.5 * jr.logdetH;
    vals[static_cast<size_t>(i)] = 0.5 * dens * std::log(dens / std::exp(jr.logdetH));
    rvals[static_cast<size_t>(i)] = rho0 * (dens - dens0);
  }
  return integrate_s(phi, vals).value + integrate_s(phi, rvals).value;
}

}  // namespace wkl
