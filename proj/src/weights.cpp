#include "wkl/weights.hpp"

namespace wkl {

void PolynomialWeight::eval(const Vec& x, WeightJet& jet) const {
  jet.value = 0;
  jet.grad = Vec(dim_);
  jet.hess = Mat(dim_);
  auto pw = [](double base, int e) {
    double r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
  };
  for (const Term& t : terms_) {
    double mono = t.coeff;
    for (int d = 0; d < dim_; ++d) mono *= pw(x[d], t.exps[d]);
    jet.value += mono;
    for (int d = 0; d < dim_; ++d) {
      if (t.exps[d] == 0) continue;
      double g = t.coeff * t.exps[d] * pw(x[d], t.exps[d] - 1);
      for (int e = 0; e < dim_; ++e)
        if (e != d) g *= pw(x[e], t.exps[e]);
      jet.grad[d] += g;
    }
    for (int d = 0; d < dim_; ++d)
      for (int e = 0; e < dim_; ++e) {
        double h = t.coeff;
        if (d == e) {
          if (t.exps[d] < 2) continue;
          h *= t.exps[d] * (t.exps[d] - 1) * pw(x[d], t.exps[d] - 2);
          for (int q = 0; q < dim_; ++q)
            if (q != d) h *= pw(x[q], t.exps[q]);
        } else {
          if (t.exps[d] == 0 || t.exps[e] == 0) continue;
          h *= t.exps[d] * pw(x[d], t.exps[d] - 1);
          h *= t.exps[e] * pw(x[e], t.exps[e] - 1);
          for (int q = 0; q < dim_; ++q)
            if (q != d && q != e) h *= pw(x[q], t.exps[q]);
        }
        jet.hess(d, e) += h;
      }
  }
}

void check_positive_on(const Weight& v, const Polytope& p, int order) {
  QuadratureRule q = p.interior_quadrature(order);
  for (const Vec& x : q.nodes)
    if (!(v.value(x) > 0.0))
      throw std::runtime_error("weight '" + v.name() + "' not positive on polytope");
}

WeightPtr soliton_w_of(const WeightPtr& v, int complex_dim) {
  if (const auto* ev = dynamic_cast<const ExponentialWeight*>(v.get()))
    return make_affine_weight({ev->xi(), static_cast<double>(complex_dim)});
  if (const auto* cv = dynamic_cast<const ConstantWeight*>(v.get()))
    return make_affine_weight(
        AffineFunction::constant(cv->dim(), static_cast<double>(complex_dim)));
  throw std::runtime_error("soliton_w_of requires an exponential or constant weight");
}

WeightPtr builtin_weight(const std::string& name, int dim, const std::vector<double>& params) {
  if (name == "constant") {
    return make_constant(dim, params.empty() ? 1.0 : params[0]);
  }
  if (name == "affine") {
    if (static_cast<int>(params.size()) != dim + 1)
      throw std::runtime_error("affine weight needs k+1 parameters");
    Vec xi(dim);
    for (int d = 0; d < dim; ++d) xi[d] = params[d];
    return make_affine_weight({xi, params[static_cast<size_t>(dim)]});
  }
  if (name == "exponential") {
    if (static_cast<int>(params.size()) != dim)
      throw std::runtime_error("exponential weight needs k parameters");
    Vec xi(dim);
    for (int d = 0; d < dim; ++d) xi[d] = params[d];
    return make_exponential(xi);
  }
  if (name == "polynomial") {
    // params flattened as (coeff, e_1..e_k) repeated.
    const size_t stride = static_cast<size_t>(dim) + 1;
    if (params.empty() || params.size() % stride != 0)
      throw std::runtime_error("polynomial weight needs (coeff, exponents) tuples");
    std::vector<PolynomialWeight::Term> terms;
    for (size_t off = 0; off < params.size(); off += stride) {
      PolynomialWeight::Term t{params[off], {0, 0, 0}};
      for (int d = 0; d < dim; ++d) t.exps[static_cast<size_t>(d)] = static_cast<int>(params[off + 1 + static_cast<size_t>(d)]);
      terms.push_back(t);
    }
    return std::make_shared<PolynomialWeight>(dim, std::move(terms));
  }
  if (name == "soliton_w_of") {
    // params = xi (k entries), complex dimension n.
    if (static_cast<int>(params.size()) != dim + 1)
      throw std::runtime_error("soliton_w_of needs k+1 parameters (xi, n)");
    Vec xi(dim);
    for (int d = 0; d < dim; ++d) xi[d] = params[d];
    return soliton_w_of(make_exponential(xi), static_cast<int>(params[static_cast<size_t>(dim)]));
  }
  throw std::runtime_error("unknown weight '" + name + "'");
}

}  // namespace wkl
