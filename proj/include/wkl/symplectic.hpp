#pragma once

// Symplectic potentials G = G_can + h on a moment polytope P, where
// G_can(x) = (1/2) sum_i ell_i(x) log ell_i(x) is the canonical term built
// from the facet affine functions and h is a smooth bounded correction.
// Jets up to fourth order are analytic: the boundary singularity of the
// Hessian lives entirely in the ell log ell terms and is evaluated in closed
// form rather than differenced.

#include <memory>
#include <stdexcept>

#include "wkl/polytope.hpp"
#include "wkl/smooth_fn.hpp"

namespace wkl {

struct ConvexityError : std::runtime_error {
  ConvexityError() : std::runtime_error("convexity violation") {}
};

class SymplecticPotential {
 public:
  SymplecticPotential(std::shared_ptr<const Polytope> p, SmoothFnPtr h);

  int dim() const { return polytope_->dim(); }
  const Polytope& polytope() const { return *polytope_; }
  std::shared_ptr<const Polytope> polytope_ptr() const { return polytope_; }
  const SmoothFnPtr& correction() const { return h_; }

  // Jets of G at an interior point; `order` in {0,..,4} bounds what is filled.
  void eval(const Vec& x, Jet4& jet, int order = 4) const;

  double value(const Vec& x) const {
    Jet4 j(dim());
    eval(x, j, 0);
    return j.value;
  }
  Vec grad(const Vec& x) const {
    Jet4 j(dim());
    eval(x, j, 1);
    return j.grad;
  }
  Mat hess(const Vec& x) const {
    Jet4 j(dim());
    eval(x, j, 2);
    return j.hess;
  }

  // Asserts min eig of Hess G > 0 on the interior quadrature nodes.
  void check_convexity(int quad_order = 8) const;

  SymplecticPotential with_correction(SmoothFnPtr extra) const;
  // G - <a, x> + c (torus translation / normalization payloads).
  SymplecticPotential with_affine(const Vec& a, double c) const;

 private:
  std::shared_ptr<const Polytope> polytope_;
  SmoothFnPtr h_;
};

SymplecticPotential guillemin_potential(std::shared_ptr<const Polytope> p);

}  // namespace wkl
