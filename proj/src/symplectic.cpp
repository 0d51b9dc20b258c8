#include "wkl/symplectic.hpp"

#include <cmath>

namespace wkl {

SymplecticPotential::SymplecticPotential(std::shared_ptr<const Polytope> p, SmoothFnPtr h)
    : polytope_(std::move(p)), h_(std::move(h)) {
  if (!h_) h_ = make_zero(polytope_->dim());
  if (h_->dim() != polytope_->dim())
    throw std::runtime_error("correction dimension mismatch");
}

void SymplecticPotential::eval(const Vec& x, Jet4& jet, int order) const {
  const int k = dim();
  jet = Jet4(k);
  for (const Facet& f : polytope_->facets()) {
    const double l = dot(x, f.normal) + f.offset;
    if (!(l > 0.0)) throw std::runtime_error("point not interior to polytope");
    const double logl = std::log(l);
    jet.value += 0.5 * l * logl;
    if (order < 1) continue;
    const Vec& u = f.normal;
    for (int a = 0; a < k; ++a) jet.grad[a] += 0.5 * (logl + 1.0) * u[a];
    if (order < 2) continue;
    const double c2 = 0.5 / l;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) jet.hess(a, b) += c2 * u[a] * u[b];
    if (order < 3) continue;
    const double c3 = -0.5 / (l * l);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        for (int c = 0; c < k; ++c) jet.d3(a, b, c) += c3 * u[a] * u[b] * u[c];
    if (order < 4) continue;
    const double c4 = 1.0 / (l * l * l);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        for (int c = 0; c < k; ++c)
          for (int e = 0; e < k; ++e) jet.d4(a, b, c, e) += c4 * u[a] * u[b] * u[c] * u[e];
  }
  Jet4 hj(k);
  h_->eval(x, hj);
  jet.add_scaled(hj, 1.0);
}

void SymplecticPotential::check_convexity(int quad_order) const {
  QuadratureRule q = polytope_->interior_quadrature(quad_order);
  Jet4 j(dim());
  for (const Vec& x : q.nodes) {
    eval(x, j, 2);
    if (!(min_eigenvalue(j.hess) > 0.0)) throw ConvexityError();
  }
}

SymplecticPotential SymplecticPotential::with_correction(SmoothFnPtr extra) const {
  if (!extra || extra->kind() == "zero") return *this;
  if (h_->kind() == "zero") return SymplecticPotential(polytope_, std::move(extra));
  return SymplecticPotential(polytope_, make_sum({h_, std::move(extra)}));
}

SymplecticPotential SymplecticPotential::with_affine(const Vec& a, double c) const {
  Vec minus_a = a;
  minus_a *= -1.0;
  auto lin = std::make_shared<QuadraticFn>(Vec(dim()), Mat(dim()), minus_a, c);
  return with_correction(lin);
}

SymplecticPotential guillemin_potential(std::shared_ptr<const Polytope> p) {
  const int k = p->dim();
  return SymplecticPotential(std::move(p), make_zero(k));
}

}  // namespace wkl
