#include <doctest.h>

#include <memory>

#include "oracles.hpp"
#include "wkl/ma_ops.hpp"
#include "wkl/soliton.hpp"
#include "wkl/fields.hpp"

using namespace wkl;

namespace {

StatePtr fs01() {
  static StatePtr st = guillemin_state(std::make_shared<Polytope>(make_interval(0, 1)), {8.0, 161});
  return st;
}

StatePtr p2_state() {
  static StatePtr st = guillemin_state(std::make_shared<Polytope>(make_simplex(2, 3.0)), {9.0, 145});
  return st;
}

StatePtr perturbed_p2() {
  static StatePtr st = [] {
    auto q = std::make_shared<QuadraticFn>(
        QuadraticFn::scaled_sqdist(p2_state()->polytope().barycenter(), 0.05));
    return perturb_state(*p2_state(), q);
  }();
  return st;
}

}  // namespace

TEST_CASE("fubini-study on [0,1] is einstein with constant 2") {
  auto st = fs01();
  const int center = (st->node_count() - 1) / 2;
  double cfit = 0;
  {
    const CurvPoint c = curv_point_at(*st, center);
    cfit = -half_logdet_jets(c).hess(0, 0) / c.H(0, 0);
  }
  double sup = 0;
  for (int i = 0; i < st->node_count(); ++i) {
    const CurvPoint c = curv_point_at(*st, i);
    const PotentialJets u = half_logdet_jets(c);
    sup = std::max(sup, std::fabs(-u.hess(0, 0) - cfit * c.H(0, 0)) / (1.0 + std::fabs(c.H(0, 0))));
  }
  CHECK(cfit == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(sup <= 1e-8);
}

TEST_CASE("gauss-bonnet total on the fubini-study interval") {
  auto st = fs01();
  auto v1 = make_constant(1, 1.0);
  CurvatureField cf = scalar_curvatures(st, v1);
  std::vector<double> integrand(static_cast<size_t>(st->node_count()));
  for (int i = 0; i < st->node_count(); ++i)
    integrand[static_cast<size_t>(i)] =
        cf.scalar[static_cast<size_t>(i)] * std::exp(st->jet_at(i, 2).logdetH);
  IntegralResult r = integrate_s(*st, integrand);
  // int S(omega) omega = 2 * Vol(P) in DH units; the boundary measure of
  // [0,1] is 2, matching the lattice-boundary oracle.
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-6));
  for (int i = 0; i < st->node_count(); ++i)
    CHECK(cf.scalar[static_cast<size_t>(i)] == doctest::Approx(2.0).epsilon(1e-8));  // S is constant
}

TEST_CASE("extremal right-hand side matches the boundary-measure oracle on P^2") {
  auto st = p2_state();
  auto v1 = make_constant(2, 1.0);
  CurvatureField cf = scalar_curvatures(st, v1);
  // int ell(m) S(omega) MA(0) = int_{dP} ell dsigma for affine ell
  QuadratureRule bq = st->polytope().boundary_quadrature(8);
  for (const AffineFunction& ell :
       {AffineFunction::constant(2, 1.0), AffineFunction{Vec{1.0, 0.0}, 0.0},
        AffineFunction{Vec{0.0, 1.0}, 0.0}}) {
    std::vector<double> integrand(static_cast<size_t>(st->node_count()));
    for (int i = 0; i < st->node_count(); ++i) {
      const StateJet j = st->jet_at(i, 2);
      integrand[static_cast<size_t>(i)] =
          ell(j.x) * cf.scalar[static_cast<size_t>(i)] * std::exp(j.logdetH);
    }
    const double lhs = integrate_s(*st, integrand).value;
    double rhs = 0;
    for (size_t b = 0; b < bq.nodes.size(); ++b) rhs += bq.weights[b] * ell(bq.nodes[b]);
    CHECK(lhs == doctest::Approx(rhs).epsilon(5e-6));
  }
}

TEST_CASE("lahdili identity and the trace route for S_v") {
  std::vector<std::pair<StatePtr, int>> fixtures{{fs01(), 1}, {p2_state(), 2}, {perturbed_p2(), 2}};
  for (auto& [st, k] : fixtures) {
    std::vector<WeightPtr> weights;
    weights.push_back(make_constant(k, 1.0));
    Vec xi(k);
    xi[0] = 0.3;
    if (k > 1) xi[1] = -0.2;
    weights.push_back(make_exponential(xi));
    Vec lin(k);
    lin[0] = 0.1;
    weights.push_back(make_affine_weight({lin, 2.0}));
    for (const auto& v : weights) {
      CurvatureField cf = scalar_curvatures(st, v);
      CHECK(cf.lahdili_sup_rel <= 1e-8);
      // the trace route contracts against Hess G and only resolves away from
      // the boundary layer; compare on the interior window
      GridValues tr = weighted_scalar_via_trace(st, v);
      double sup = 0;
      for (int i = 0; i < st->node_count(); ++i) {
        if (st->polytope().min_facet_value(st->x_of(i)) < 1e-4) continue;
        sup = std::max(sup, std::fabs(tr[static_cast<size_t>(i)] - cf.weighted[static_cast<size_t>(i)]) /
                                (1.0 + std::fabs(cf.weighted[static_cast<size_t>(i)])));
      }
      CHECK(sup <= 1e-8);
    }
  }
}

TEST_CASE("ma and ma_v masses agree between the two grids") {
  auto st = perturbed_p2();
  DensityField d1 = ma(st);
  CHECK(d1.mass_x == doctest::Approx(4.5).epsilon(1e-12));
  CHECK(d1.mass_s == doctest::Approx(d1.mass_x).epsilon(2e-6));
  CHECK(std::fabs(d1.mass_s - d1.mass_x) <= 20 * d1.tail_estimate + 1e-9);

  auto v = make_exponential(Vec{0.2, -0.1});
  DensityField dv = ma_v(st, v);
  CHECK(dv.mass_s == doctest::Approx(dv.mass_x).epsilon(1e-6));

  // v == 1 reduces ma_v to ma pointwise
  DensityField dv1 = ma_v(st, make_constant(2, 1.0));
  for (int i = 0; i < dv1.nodes(); i += 97)
    CHECK(dv1.s_density[static_cast<size_t>(i)] ==
          doctest::Approx(d1.s_density[static_cast<size_t>(i)]).epsilon(1e-14));
}

TEST_CASE("twisted operator: zero twist, self twist, symmetry") {
  auto st = perturbed_p2();
  auto v = make_exponential(Vec{0.15, 0.1});

  SUBCASE("zero twist gives the zero field") {
    DensityField z = ma_twisted(st, v, EquivariantTwist::zero(2));
    for (double t : z.s_density) CHECK(std::fabs(t) <= 1e-14);
  }

  SUBCASE("state_form twist by the state itself computes the soliton trace") {
    EquivariantTwist self = EquivariantTwist::state_form(st);
    GridValues tr = weighted_trace(st, v, self);
    for (int i = 0; i < st->node_count(); i += 131) {
      const StateJet j = st->jet_at(i, 2);
      const Vec dl = v->dlog(j.x);
      CHECK(tr[static_cast<size_t>(i)] ==
            doctest::Approx(2.0 + dot(dl, j.x)).epsilon(1e-9));
    }
  }

  SUBCASE("symmetry of the twisted pairing in f and g") {
    oracle::Rng rng(99);
    for (int trial = 0; trial < 3; ++trial) {
      // payloads smooth on X: weights composed with the moment map
      auto wf = builtin_weight("polynomial", 2,
                               {rng.uniform(-.5, .5), 1, 0, rng.uniform(-.5, .5), 0, 1,
                                rng.uniform(-.3, .3), 1, 1});
      auto wg = make_exponential(Vec{rng.uniform(-.3, .3), rng.uniform(-.3, .3)});
      auto f = make_composed_weight(wf, st);
      auto g = make_composed_weight(wg, st);
      DensityField mf = ma_twisted(st, v, EquivariantTwist::exact(f));
      DensityField mg = ma_twisted(st, v, EquivariantTwist::exact(g));
      std::vector<double> gv(static_cast<size_t>(st->node_count()));
      std::vector<double> fv(static_cast<size_t>(st->node_count()));
      for (int i = 0; i < st->node_count(); ++i) {
        wkl::WeightJet jf, jg;
        wf->eval(st->x_of(i), jf);
        wg->eval(st->x_of(i), jg);
        fv[static_cast<size_t>(i)] = jf.value;
        gv[static_cast<size_t>(i)] = jg.value;
      }
      const IntegralResult lhs = integrate_against(mf, gv);
      const IntegralResult rhs = integrate_against(mg, fv);
      CHECK(std::fabs(lhs.value - rhs.value) <=
            1e-7 * (1.0 + std::fabs(lhs.value)) + 2.0 * (lhs.tail + rhs.tail));
    }
  }
}

TEST_CASE("weighted laplacian: kernel, self-adjointness, negativity") {
  auto st = perturbed_p2();
  auto v = make_exponential(Vec{0.25, -0.15});
  DensityField mav = ma_v(st, v);

  SUBCASE("constants are annihilated") {
    auto c = make_analytic_sfield(
        std::make_shared<QuadraticFn>(Vec{0.0, 0.0}, Mat(2), Vec{0.0, 0.0}, 3.25));
    GridValues lap = weighted_laplacian(st, v, *c);
    for (double t : lap) CHECK(std::fabs(t) <= 1e-12);
  }

  SUBCASE("self-adjointness and negativity under quadrature") {
    oracle::Rng rng(4242);
    for (int trial = 0; trial < 3; ++trial) {
      auto wf = builtin_weight("polynomial", 2,
                               {rng.uniform(-.5, .5), 1, 0, rng.uniform(-.5, .5), 0, 2});
      auto wg = make_exponential(Vec{rng.uniform(-.3, .3), rng.uniform(-.3, .3)});
      auto f = make_composed_weight(wf, st);
      auto g = make_composed_weight(wg, st);
      GridValues lf = weighted_laplacian(st, v, *f);
      GridValues lg = weighted_laplacian(st, v, *g);
      std::vector<double> glf(lf.size()), flg(lf.size()), flf(lf.size());
      for (int i = 0; i < st->node_count(); ++i) {
        wkl::WeightJet jf, jg;
        wf->eval(st->x_of(i), jf);
        wg->eval(st->x_of(i), jg);
        glf[static_cast<size_t>(i)] = jg.value * lf[static_cast<size_t>(i)];
        flg[static_cast<size_t>(i)] = jf.value * lg[static_cast<size_t>(i)];
        flf[static_cast<size_t>(i)] = jf.value * lf[static_cast<size_t>(i)];
      }
      const IntegralResult a = integrate_against(mav, glf);
      const IntegralResult b = integrate_against(mav, flg);
      CHECK(std::fabs(a.value - b.value) <=
            1e-7 * (1.0 + std::fabs(a.value)) + 2.0 * (a.tail + b.tail));
      const IntegralResult neg = integrate_against(mav, flf);
      CHECK(neg.value <= 1e-8 + 2.0 * neg.tail);
    }
  }
}

TEST_CASE("ricci data: centering, dual moment identity, product splitting") {
  SUBCASE("moment of the ricci form is centered") {
    RicciData rd = ricci_data(p2_state());
    CHECK(rd.centering_residual <= 2e-7);
  }

  SUBCASE("m_{omega^n} equals -(1/2) Delta_omega m") {
    auto st = perturbed_p2();
    RicciData rd = ricci_data(st);
    for (int i = 0; i < st->node_count(); i += 61) {
      if (st->polytope().min_facet_value(st->x_of(i)) < 1e-4) continue;
      const StateJet j = st->jet_at(i, 3);
      for (int a = 0; a < 2; ++a) {
        double lap_ma = 0;  // tr(Hinv F3[:,:,a])
        for (int p = 0; p < 2; ++p)
          for (int q = 0; q < 2; ++q) lap_ma += j.Hinv(p, q) * j.F3(p, q, a);
        CHECK(std::fabs(rd.moment[static_cast<size_t>(i)][a] - (-0.5 * lap_ma)) <= 1e-6);
      }
    }
  }

  SUBCASE("product state on P^1 x P^1 splits coordinatewise") {
    auto box = std::make_shared<Polytope>(make_box(Vec{-1.0, -1.0}, Vec{1.0, 1.0}));
    auto st = guillemin_state(box, {6.0, 65});
    RicciData rd = ricci_data(st);
    // moment component a depends only on s_a: compare nodes sharing s_a
    const int n = st->nodes_per_dim();
    auto node = [&](int i, int j) { return i + n * j; };
    for (int i = 0; i < n; i += 8)
      for (int j = 0; j < n; j += 8) {
        CHECK(rd.moment[static_cast<size_t>(node(i, j))][0] ==
              doctest::Approx(rd.moment[static_cast<size_t>(node(i, 0))][0]).epsilon(1e-9));
        CHECK(rd.moment[static_cast<size_t>(node(i, j))][1] ==
              doctest::Approx(rd.moment[static_cast<size_t>(node(0, j))][1]).epsilon(1e-9));
      }
  }
}

TEST_CASE("one-dimensional soliton: closed form, shooting oracle, residuals") {
  const double xi = 0.5;
  SolitonSolution sol = solve_soliton_1d(xi);

  SUBCASE("closed form satisfies the ODE and the two-point conditions") {
    CHECK(sol.w(sol.x_left) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sol.w(sol.x_right) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sol.x_right - sol.x_left == doctest::Approx(2.0).epsilon(1e-14));
    for (double x = sol.x_left + 0.05; x < sol.x_right; x += 0.1)
      CHECK(sol.dw(x) == doctest::Approx(-xi * sol.w(x) - 2 * x).epsilon(1e-12));
  }

  SUBCASE("shoot-and-match oracle recovers the same interval placement") {
    // Shoot W' = -xi W - 2x with W(tau-1) = 0 by RK4 and match W(tau+1) = 0
    // via bisection on tau.
    auto shoot = [&](double tau) {
      double x = tau - 1.0, w = 0.0;
      const int steps = 4000;
      const double h = 2.0 / steps;
      auto f = [&](double xx, double ww) { return -xi * ww - 2 * xx; };
      for (int i = 0; i < steps; ++i) {
        const double k1 = f(x, w);
        const double k2 = f(x + h / 2, w + h / 2 * k1);
        const double k3 = f(x + h / 2, w + h / 2 * k2);
        const double k4 = f(x + h, w + h * k3);
        w += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        x += h;
      }
      return w;
    };
    double lo = -1.0, hi = 0.5;
    REQUIRE(shoot(lo) * shoot(hi) < 0);
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (shoot(lo) * shoot(mid) <= 0) hi = mid;
      else lo = mid;
    }
    CHECK(0.5 * (lo + hi) == doctest::Approx(sol.tau).epsilon(1e-8));
  }

  SUBCASE("soliton state passes both residuals; fubini-study with xi fails") {
    auto st = soliton_state(xi, {7.0, 161});
    auto v = make_exponential(Vec{xi});
    SolitonResidual res = soliton_residual(st, v);
    CHECK(res.value <= 1e-6);

    auto fs = guillemin_state(std::make_shared<Polytope>(make_interval(-1, 1)), {7.0, 161});
    SolitonResidual bad = soliton_residual(fs, v);
    CHECK(bad.value >= 1e-5);
    CHECK(bad.scalar_eq >= 0.1);

    // the same fubini-study state is a genuine soliton for xi = 0
    SolitonResidual good = soliton_residual(fs, make_constant(1, 1.0));
    CHECK(good.value <= 1e-6);
  }

  SUBCASE("non-fano normalization is rejected") {
    auto st01 = fs01();
    CHECK_THROWS_WITH_AS((void)soliton_residual(st01, make_constant(1, 1.0)),
                         "non-Fano normalization", std::runtime_error);
  }
}
