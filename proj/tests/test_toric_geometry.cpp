#include <doctest.h>

#include <memory>

#include "oracles.hpp"
#include "wkl/state.hpp"

using namespace wkl;

namespace {

std::shared_ptr<const Polytope> interval01() {
  return std::make_shared<Polytope>(make_interval(0, 1));
}
std::shared_ptr<const Polytope> simplex3() {
  return std::make_shared<Polytope>(make_simplex(2, 3.0));
}

}  // namespace

TEST_CASE("canonical potential jets match finite differences") {
  auto p = simplex3();
  SymplecticPotential g = guillemin_potential(p);
  oracle::Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Vec x{rng.uniform(0.3, 1.2), rng.uniform(0.3, 1.2)};
    Jet4 jet(2);
    g.eval(x, jet, 4);
    auto f = [&](const Vec& y) { return g.value(y); };
    Vec fg = oracle::fd_gradient(f, x);
    Mat fh = oracle::fd_hessian(f, x);
    for (int d = 0; d < 2; ++d) CHECK(jet.grad[d] == doctest::Approx(fg[d]).epsilon(1e-7));
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) CHECK(jet.hess(a, b) == doctest::Approx(fh(a, b)).epsilon(1e-5));
    // third derivatives against FD of the analytic Hessian
    const double h = 1e-5;
    for (int c = 0; c < 2; ++c) {
      Vec xp = x, xm = x;
      xp[c] += h;
      xm[c] -= h;
      Jet4 jp(2), jm(2);
      g.eval(xp, jp, 2);
      g.eval(xm, jm, 2);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double fd3 = (jp.hess(a, b) - jm.hess(a, b)) / (2 * h);
          CHECK(jet.d3(a, b, c) == doctest::Approx(fd3).epsilon(1e-5));
        }
    }
    // fourth derivatives against FD of the analytic third
    for (int e = 0; e < 2; ++e) {
      Vec xp = x, xm = x;
      xp[e] += h;
      xm[e] -= h;
      Jet4 jp(2), jm(2);
      g.eval(xp, jp, 3);
      g.eval(xm, jm, 3);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < 2; ++c) {
            const double fd4 = (jp.d3(a, b, c) - jm.d3(a, b, c)) / (2 * h);
            CHECK(jet.d4(a, b, c, e) == doctest::Approx(fd4).epsilon(2e-4));
          }
    }
  }
}

TEST_CASE("log-sum-exp correction jets match finite differences") {
  std::vector<AffineFunction> pieces{{Vec{0.5, -0.3}, 0.1}, {Vec{-0.2, 0.4}, 0.0}, {Vec{0.1, 0.1}, -0.2}};
  LogSumExpFn f(0.7, 2.5, pieces);
  oracle::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Vec x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    Jet4 jet(2);
    f.eval(x, jet);
    auto fv = [&](const Vec& y) { return f.value(y); };
    Vec fg = oracle::fd_gradient(fv, x);
    Mat fh = oracle::fd_hessian(fv, x);
    for (int d = 0; d < 2; ++d) CHECK(jet.grad[d] == doctest::Approx(fg[d]).epsilon(1e-6));
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        CHECK(std::fabs(jet.hess(a, b) - fh(a, b)) <= 1e-6 * (1 + std::fabs(fh(a, b))));
    const double h = 1e-5;
    for (int c = 0; c < 2; ++c) {
      Vec xp = x, xm = x;
      xp[c] += h;
      xm[c] -= h;
      Jet4 jp(2), jm(2);
      f.eval(xp, jp);
      f.eval(xm, jm);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double fd3 = (jp.hess(a, b) - jm.hess(a, b)) / (2 * h);
          CHECK(std::fabs(jet.d3(a, b, c) - fd3) <= 2e-5 * (1 + std::fabs(fd3)));
          for (int e = 0; e < 2; ++e) {
            const double fd4 = (jp.d3(a, b, e) - jm.d3(a, b, e)) / (2 * h);
            CHECK(std::fabs(jet.d4(a, b, e, c) - fd4) <= 2e-4 * (1 + std::fabs(fd4)));
          }
        }
    }
  }
}

TEST_CASE("guillemin state on [0,1] reproduces the logistic moment map") {
  auto state = guillemin_state(interval01(), {6.0, 65});
  for (int i = 0; i < state->node_count(); ++i) {
    const double s = state->s_of(i)[0];
    const double expected = std::exp(2 * s) / (1.0 + std::exp(2 * s));
    CHECK(std::fabs(state->x_of(i)[0] - expected) <= 1e-9);
  }
  CHECK(state->legendre_residual() <= 1e-8);
}

TEST_CASE("guillemin state on the simplex passes the legendre round trip") {
  auto state = guillemin_state(simplex3(), {5.0, 33});
  CHECK(state->legendre_residual() <= 1e-8);
  // moment image strictly interior
  for (int i = 0; i < state->node_count(); ++i)
    CHECK(state->polytope().min_facet_value(state->x_of(i)) > 0.0);
}

TEST_CASE("state F-jets agree with finite differences of the legendre solve") {
  auto state = guillemin_state(simplex3(), {5.0, 33});
  oracle::Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Vec s{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    StateJet sj = state->jet_at_s(s, 4);
    const double h = 1e-4;
    // dx/ds == Hess F
    for (int d = 0; d < 2; ++d) {
      Vec sp = s, sm = s;
      sp[d] += h;
      sm[d] -= h;
      Vec xp = state->moment_of(sp), xm = state->moment_of(sm);
      for (int a = 0; a < 2; ++a) {
        const double fd = (xp[a] - xm[a]) / (2 * h);
        CHECK(std::fabs(sj.H(a, d) - fd) <= 1e-6 * (1 + std::fabs(fd)));
      }
      // F3 via FD of H
      StateJet jp = state->jet_at_s(sp, 2), jm = state->jet_at_s(sm, 2);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double fd3 = (jp.H(a, b) - jm.H(a, b)) / (2 * h);
          CHECK(std::fabs(sj.F3(a, b, d) - fd3) <= 1e-5 * (1 + std::fabs(fd3)));
        }
      // F4 via FD of F3
      StateJet jp3 = state->jet_at_s(sp, 3), jm3 = state->jet_at_s(sm, 3);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < 2; ++c) {
            const double fd4 = (jp3.F3(a, b, c) - jm3.F3(a, b, c)) / (2 * h);
            CHECK(std::fabs(sj.F4(a, b, c, d) - fd4) <= 1e-4 * (1 + std::fabs(fd4)));
          }
    }
    // det Hess F * det Hess G == 1 (reciprocal Hessians)
    CHECK(det(sj.H) * det(sj.Hinv) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("perturb_state: identity, valid quadratic, convexity violation") {
  auto base = guillemin_state(simplex3(), {5.0, 33});

  SUBCASE("h = 0 reproduces the base state") {
    auto same = perturb_state(*base, make_zero(2));
    for (int i = 0; i < base->node_count(); i += 37)
      CHECK(norm_inf(same->x_of(i) - base->x_of(i)) <= 1e-10);
  }
  SUBCASE("small convex quadratic is accepted and keeps the moment image interior") {
    auto q = std::make_shared<QuadraticFn>(QuadraticFn::scaled_sqdist(base->polytope().barycenter(), 0.05));
    auto st = perturb_state(*base, q);
    for (int i = 0; i < st->node_count(); ++i)
      CHECK(st->polytope().min_facet_value(st->x_of(i)) > 0.0);
  }
  SUBCASE("strongly concave correction violates convexity") {
    auto q = std::make_shared<QuadraticFn>(QuadraticFn::scaled_sqdist(base->polytope().barycenter(), -10.0));
    CHECK_THROWS_AS((void)perturb_state(*base, q), ConvexityError);
  }
}

TEST_CASE("kahler_potential_of: constants and linear shifts") {
  auto ref = guillemin_state(interval01(), {6.0, 129});

  SUBCASE("state equal to reference gives phi = 0") {
    auto phi = kahler_potential_of(*ref, *ref);
    for (double v : phi) CHECK(std::fabs(v) <= 1e-12);
  }
  SUBCASE("G + delta gives phi = -delta") {
    const double delta = 0.37;
    auto shifted = std::make_shared<KahlerState>(
        ref->potential().with_affine(Vec{0.0}, delta), ref->grid());
    auto phi = kahler_potential_of(*shifted, *ref);
    for (double v : phi) CHECK(v == doctest::Approx(-delta).epsilon(1e-11));
  }
  SUBCASE("G + <a,x> gives phi(s) = F_ref(s - a) - F_ref(s)") {
    const double a = 0.8;
    auto tilted = std::make_shared<KahlerState>(
        ref->potential().with_affine(Vec{-a}, 0.0), ref->grid());
    auto phi = kahler_potential_of(*tilted, *ref);
    for (int i = 0; i < ref->node_count(); i += 8) {
      const Vec s = ref->s_of(i);
      Vec sm = s;
      sm[0] -= a;
      const double expected = ref->kahler_potential(sm) - ref->f_of(i);
      CHECK(phi[static_cast<size_t>(i)] == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("torus translation is a cocycle") {
  auto base = guillemin_state(simplex3(), {5.0, 33});
  Vec a{0.3, -0.2}, b{-0.1, 0.25};

  auto ta = torus_translate(*base, a);
  auto tab = torus_translate(*ta, b);
  auto tsum = torus_translate(*base, a + b);
  for (int i = 0; i < base->node_count(); i += 53)
    CHECK(norm_inf(tab->x_of(i) - tsum->x_of(i)) <= 1e-9);

  auto t0 = torus_translate(*base, Vec{0.0, 0.0});
  for (int i = 0; i < base->node_count(); i += 53)
    CHECK(norm_inf(t0->x_of(i) - base->x_of(i)) <= 1e-12);
}

TEST_CASE("degenerate polytope cannot form a state") {
  CHECK_THROWS_AS((void)make_interval(0.5, 0.5), PolytopeError);
}
