#pragma once

// Weights v, w: smooth functions on t^vee with analytic gradient and Hessian
// evaluators. Finite differences never appear on the runtime path; they are
// test oracles only.

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "wkl/linalg.hpp"
#include "wkl/polytope.hpp"
#include "wkl/torus.hpp"

namespace wkl {

struct WeightJet {
  double value = 0;
  Vec grad;
  Mat hess;
};

class Weight {
 public:
  virtual ~Weight() = default;
  virtual void eval(const Vec& x, WeightJet& jet) const = 0;
  virtual std::string name() const = 0;
  // Asserted positivity domain; callers verify on their polytope.
  virtual bool claims_positive() const { return true; }

  double value(const Vec& x) const {
    WeightJet j;
    eval(x, j);
    return j.value;
  }
  Vec grad(const Vec& x) const {
    WeightJet j;
    eval(x, j);
    return j.grad;
  }
  // (log v)'(x) = v'(x)/v(x).
  Vec dlog(const Vec& x) const {
    WeightJet j;
    eval(x, j);
    Vec g = j.grad;
    g *= 1.0 / j.value;
    return g;
  }
};

using WeightPtr = std::shared_ptr<const Weight>;

class ConstantWeight final : public Weight {
 public:
  ConstantWeight(int dim, double c) : dim_(dim), c_(c) {}
  void eval(const Vec& x, WeightJet& jet) const override {
    (void)x;
    jet.value = c_;
    jet.grad = Vec(dim_);
    jet.hess = Mat(dim_);
  }
  std::string name() const override { return "constant"; }
  bool claims_positive() const override { return c_ > 0; }
  int dim() const { return dim_; }

 private:
  int dim_;
  double c_;
};

class AffineWeight final : public Weight {
 public:
  explicit AffineWeight(AffineFunction ell) : ell_(ell) {}
  void eval(const Vec& x, WeightJet& jet) const override {
    jet.value = ell_(x);
    jet.grad = ell_.xi;
    jet.hess = Mat(ell_.rank());
  }
  std::string name() const override { return "affine"; }
  bool claims_positive() const override { return false; }  // checked per polytope

 private:
  AffineFunction ell_;
};

// v(x) = exp(<xi, x>).
class ExponentialWeight final : public Weight {
 public:
  explicit ExponentialWeight(Vec xi) : xi_(xi) {}
  void eval(const Vec& x, WeightJet& jet) const override {
    const double v = std::exp(dot(xi_, x));
    jet.value = v;
    jet.grad = v * xi_;
    jet.hess = outer(xi_, xi_);
    jet.hess *= v;
  }
  std::string name() const override { return "exponential"; }
  const Vec& xi() const { return xi_; }

 private:
  Vec xi_;
};

// Multivariate polynomial sum of c * prod x_d^{e_d}.
class PolynomialWeight final : public Weight {
 public:
  struct Term {
    double coeff;
    std::array<int, 3> exps;
  };
  PolynomialWeight(int dim, std::vector<Term> terms) : dim_(dim), terms_(std::move(terms)) {}
  void eval(const Vec& x, WeightJet& jet) const override;
  std::string name() const override { return "polynomial"; }
  bool claims_positive() const override { return false; }

 private:
  int dim_;
  std::vector<Term> terms_;
};

// Pointwise product of two weights (used for v*w and v*w*ell^ext).
class ProductWeight final : public Weight {
 public:
  ProductWeight(WeightPtr a, WeightPtr b) : a_(std::move(a)), b_(std::move(b)) {}
  void eval(const Vec& x, WeightJet& jet) const override {
    WeightJet ja, jb;
    a_->eval(x, ja);
    b_->eval(x, jb);
    jet.value = ja.value * jb.value;
    jet.grad = jb.value * ja.grad + ja.value * jb.grad;
    jet.hess = jb.value * ja.hess + ja.value * jb.hess;
    jet.hess += outer(ja.grad, jb.grad);
    jet.hess += outer(jb.grad, ja.grad);
  }
  std::string name() const override { return a_->name() + "*" + b_->name(); }
  bool claims_positive() const override { return a_->claims_positive() && b_->claims_positive(); }

 private:
  WeightPtr a_, b_;
};

// Verifies v > 0 on the quadrature nodes of P; throws otherwise.
void check_positive_on(const Weight& v, const Polytope& p, int order = 8);

// Factory behind the config surface. Names: constant, affine, exponential,
// polynomial, soliton_w_of.
WeightPtr builtin_weight(const std::string& name, int dim, const std::vector<double>& params);

inline WeightPtr make_constant(int dim, double c) {
  return std::make_shared<ConstantWeight>(dim, c);
}
inline WeightPtr make_affine_weight(const AffineFunction& ell) {
  return std::make_shared<AffineWeight>(ell);
}
inline WeightPtr make_exponential(const Vec& xi) {
  return std::make_shared<ExponentialWeight>(xi);
}
inline WeightPtr make_product(WeightPtr a, WeightPtr b) {
  return std::make_shared<ProductWeight>(std::move(a), std::move(b));
}

// Soliton companion weight w(x) = n + <(log v)'(x), x>, which is affine
// exactly when v is exponential; that is the only builtin pairing.
WeightPtr soliton_w_of(const WeightPtr& v, int complex_dim);

}  // namespace wkl
