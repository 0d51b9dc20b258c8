#include <doctest.h>

#include "oracles.hpp"
#include "wkl/polytope.hpp"
#include "wkl/torus.hpp"
#include "wkl/weights.hpp"

using namespace wkl;

TEST_CASE("dual pairing of basis against dual basis is the identity") {
  TorusAlgebra t(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Vec x(3), xi(3);
      x[i] = 1.0;
      xi[j] = 1.0;
      CHECK(t.pair(x, xi) == (i == j ? 1.0 : 0.0));
    }
}

TEST_CASE("affine function evaluation and zero test") {
  AffineFunction ell({Vec{2.0, -1.0}, 0.5});
  CHECK(ell(Vec{1.0, 1.0}) == doctest::Approx(1.5));
  CHECK(!ell.is_zero());
  CHECK(AffineFunction::constant(2, 0.0).is_zero());
}

TEST_CASE("polytope volume: interval, simplex, chopped simplex") {
  CHECK(polytope_volume(make_interval(0, 1)) == doctest::Approx(1.0).epsilon(1e-14));

  Polytope simplex = make_simplex(2, 3.0);
  CHECK(polytope_volume(simplex) == doctest::Approx(4.5).epsilon(1e-14));

  // corner chop at the origin with eps = 1
  int origin = -1;
  for (size_t v = 0; v < simplex.vertices().size(); ++v)
    if (norm_inf(simplex.vertices()[v]) < 1e-12) origin = static_cast<int>(v);
  REQUIRE(origin >= 0);
  Polytope chopped = simplex.chop_corner(origin, 1.0);
  CHECK(chopped.facets().size() == 4);
  CHECK(polytope_volume(chopped) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(polytope_volume(chopped) == doctest::Approx(oracle::volume_oracle(chopped)).epsilon(1e-9));
}

TEST_CASE("polytope barycenter") {
  CHECK(polytope_barycenter(make_interval(0, 1))[0] == doctest::Approx(0.5).epsilon(1e-14));

  Polytope simplex = make_simplex(2, 3.0);
  Vec b = polytope_barycenter(simplex);
  CHECK(b[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(b[1] == doctest::Approx(1.0).epsilon(1e-13));

  int origin = -1;
  for (size_t v = 0; v < simplex.vertices().size(); ++v)
    if (norm_inf(simplex.vertices()[v]) < 1e-12) origin = static_cast<int>(v);
  Polytope chopped = simplex.chop_corner(origin, 1.0);
  Vec bo = oracle::barycenter_oracle(chopped);
  Vec bc = polytope_barycenter(chopped);
  CHECK(bc[0] == doctest::Approx(bo[0]).epsilon(1e-6));
  CHECK(bc[1] == doctest::Approx(bo[1]).epsilon(1e-6));

  // centrally symmetric polytope: barycenter equals the center exactly
  Polytope box = make_box(Vec{-2.0, 1.0}, Vec{2.0, 3.0});
  Vec bb = polytope_barycenter(box);
  CHECK(bb[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(bb[1] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("degenerate polytopes are rejected") {
  CHECK_THROWS_WITH_AS((void)make_interval(0, 0), "degenerate polytope", PolytopeError);
  // unbounded: single half-line
  std::vector<Facet> fs{{Vec{1.0}, 0.0}};
  CHECK_THROWS_AS(Polytope(1, fs), PolytopeError);
}

TEST_CASE("corner chop feasibility and volume law") {
  Polytope simplex = make_simplex(2, 3.0);
  int origin = -1;
  for (size_t v = 0; v < simplex.vertices().size(); ++v)
    if (norm_inf(simplex.vertices()[v]) < 1e-12) origin = static_cast<int>(v);

  SUBCASE("eps = 0 returns the same polytope") {
    Polytope p = simplex.chop_corner(origin, 0.0);
    CHECK(p.facets().size() == simplex.facets().size());
    CHECK(p.volume() == doctest::Approx(simplex.volume()).epsilon(1e-15));
  }
  SUBCASE("eps reaching the opposite facet is infeasible") {
    CHECK_THROWS_WITH_AS((void)simplex.chop_corner(origin, 3.0), "infeasible chop", PolytopeError);
  }
  SUBCASE("volume drop is eps^k / k! at a unimodular corner") {
    for (double eps : {0.25, 0.5, 1.0, 2.0}) {
      Polytope p = simplex.chop_corner(origin, eps);
      CHECK(simplex.volume() - p.volume() ==
            doctest::Approx(eps * eps / 2.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("delzant detection") {
  CHECK(make_simplex(2, 3.0).is_delzant());
  CHECK(make_box(Vec{0.0, 0.0}, Vec{1.0, 2.0}).is_delzant());
  Polytope chopped = make_simplex(2, 3.0).chop_corner(0, 0.5);
  CHECK(chopped.is_delzant());
  // non-Delzant: facet normal (1,2) against (1,0) at a vertex
  std::vector<Facet> fs{{Vec{1.0, 0.0}, 0.0}, {Vec{0.0, 1.0}, 0.0}, {Vec{-1.0, -2.0}, 3.0}};
  Polytope bad(2, fs);
  CHECK(!bad.is_delzant());
}

TEST_CASE("boundary lattice measure of the simplex and its chop") {
  Polytope simplex = make_simplex(2, 3.0);
  QuadratureRule bq = simplex.boundary_quadrature(8);
  CHECK(bq.total_weight() == doctest::Approx(9.0).epsilon(1e-12));

  Polytope chopped = simplex.chop_corner(0, 1.0);
  QuadratureRule bq2 = chopped.boundary_quadrature(8);
  CHECK(bq2.total_weight() == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("interior quadrature integrates polynomials exactly") {
  Polytope simplex = make_simplex(2, 3.0);
  QuadratureRule q = simplex.interior_quadrature(8);
  double vol = 0, x1 = 0, x1x2 = 0;
  for (size_t i = 0; i < q.nodes.size(); ++i) {
    vol += q.weights[i];
    x1 += q.weights[i] * q.nodes[i][0];
    x1x2 += q.weights[i] * q.nodes[i][0] * q.nodes[i][1];
  }
  CHECK(vol == doctest::Approx(4.5).epsilon(1e-13));
  CHECK(x1 == doctest::Approx(4.5).epsilon(1e-13));          // int x1 over the simplex
  CHECK(x1x2 == doctest::Approx(81.0 / 24.0).epsilon(1e-13));
}

TEST_CASE("builtin weights carry analytic derivatives") {
  oracle::Rng rng(20240817);
  const int k = 2;
  std::vector<WeightPtr> ws;
  ws.push_back(builtin_weight("constant", k, {1.0}));
  ws.push_back(builtin_weight("affine", k, {0.3, -0.2, 2.0}));
  ws.push_back(builtin_weight("exponential", k, {0.4, -0.1}));
  ws.push_back(builtin_weight("polynomial", k, {1.0, 0, 0, 0.5, 2, 0, -0.25, 1, 1}));

  for (const auto& w : ws) {
    for (int trial = 0; trial < 100; ++trial) {
      Vec x{rng.uniform(-2, 2), rng.uniform(-2, 2)};
      WeightJet jet;
      w->eval(x, jet);
      auto f = [&](const Vec& y) { return w->value(y); };
      Vec g = oracle::fd_gradient(f, x);
      Mat h = oracle::fd_hessian(f, x);
      for (int d = 0; d < k; ++d)
        CHECK(std::fabs(jet.grad[d] - g[d]) <= 1e-6 * (1.0 + std::fabs(g[d])));
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          CHECK(std::fabs(jet.hess(a, b) - h(a, b)) <= 2e-5 * (1.0 + std::fabs(h(a, b))));
    }
  }
}

TEST_CASE("exponential weight closed forms") {
  Vec xi{0.7};
  WeightPtr v = make_exponential(xi);
  WeightJet j;
  v->eval(Vec{0.5}, j);
  const double val = std::exp(0.35);
  CHECK(j.value == doctest::Approx(val).epsilon(1e-15));
  CHECK(j.grad[0] == doctest::Approx(0.7 * val).epsilon(1e-15));
  CHECK(j.hess(0, 0) == doctest::Approx(0.49 * val).epsilon(1e-15));
}

TEST_CASE("soliton companion weight of an exponential is n + <xi, x>") {
  WeightPtr w = soliton_w_of(make_exponential(Vec{0.5}), 1);
  CHECK(w->value(Vec{0.0}) == doctest::Approx(1.0));
  CHECK(w->value(Vec{0.8}) == doctest::Approx(1.4));
  // constant v has companion w == n
  CHECK(soliton_w_of(make_constant(1, 1.0), 1)->value(Vec{0.3}) == doctest::Approx(1.0));
  CHECK_THROWS(soliton_w_of(make_affine_weight({Vec{1.0}, 1.0}), 1));
}

TEST_CASE("unknown weight name is rejected") {
  CHECK_THROWS((void)builtin_weight("mystery", 1, {}));
}

TEST_CASE("weight positivity check on a polytope") {
  auto p = make_interval(0, 1);
  CHECK_NOTHROW(check_positive_on(*make_constant(1, 1.0), p));
  CHECK_THROWS(check_positive_on(*make_affine_weight({Vec{1.0}, -2.0}), p));
}
