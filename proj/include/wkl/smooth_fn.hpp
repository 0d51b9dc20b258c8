#pragma once

// Smooth corrections h to the canonical symplectic potential, with exact
// derivative jets up to fourth order. Fourth-order jets feed the weighted
// scalar curvature, so h suppliers are closed-form rather than interpolated.

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "wkl/linalg.hpp"
#include "wkl/torus.hpp"

namespace wkl {

struct Jet4 {
  double value = 0;
  Vec grad;
  Mat hess;
  Ten3 d3;
  Ten4 d4;

  explicit Jet4(int k = 0) : grad(k), hess(k), d3(k), d4(k) {}
  void add_scaled(const Jet4& o, double t) {
    value += t * o.value;
    for (int i = 0; i < grad.n; ++i) grad[i] += t * o.grad[i];
    for (int i = 0; i < grad.n; ++i)
      for (int j = 0; j < grad.n; ++j) hess(i, j) += t * o.hess(i, j);
    for (size_t i = 0; i < d3.a.size(); ++i) d3.a[i] += t * o.d3.a[i];
    for (size_t i = 0; i < d4.a.size(); ++i) d4.a[i] += t * o.d4.a[i];
  }
};

class SmoothFunction {
 public:
  virtual ~SmoothFunction() = default;
  virtual int dim() const = 0;
  virtual void eval(const Vec& x, Jet4& jet) const = 0;
  virtual std::string kind() const = 0;

  double value(const Vec& x) const {
    Jet4 j(dim());
    eval(x, j);
    return j.value;
  }
};

using SmoothFnPtr = std::shared_ptr<const SmoothFunction>;

class ZeroFn final : public SmoothFunction {
 public:
  explicit ZeroFn(int k) : k_(k) {}
  int dim() const override { return k_; }
  void eval(const Vec&, Jet4& jet) const override { jet = Jet4(k_); }
  std::string kind() const override { return "zero"; }

 private:
  int k_;
};

// c + <b, x - x0> + (1/2) (x - x0)^T A (x - x0).
class QuadraticFn final : public SmoothFunction {
 public:
  QuadraticFn(Vec x0, Mat a, Vec b, double c) : x0_(x0), a_(a), b_(b), c_(c) {}
  // coeff * |x - x0|^2
  static QuadraticFn scaled_sqdist(const Vec& x0, double coeff) {
    Mat a(x0.n);
    for (int d = 0; d < x0.n; ++d) a(d, d) = 2.0 * coeff;
    return QuadraticFn(x0, a, Vec(x0.n), 0.0);
  }
  int dim() const override { return x0_.n; }
  void eval(const Vec& x, Jet4& jet) const override {
    jet = Jet4(x0_.n);
    const Vec d = x - x0_;
    const Vec ad = mul(a_, d);
    jet.value = c_ + dot(b_, d) + 0.5 * dot(d, ad);
    jet.grad = b_ + ad;
    jet.hess = a_;
  }
  std::string kind() const override { return "quadratic"; }
  const Vec& center() const { return x0_; }
  const Mat& coeff() const { return a_; }
  const Vec& linear() const { return b_; }
  double constant() const { return c_; }

 private:
  Vec x0_;
  Mat a_;
  Vec b_;
  double c_;
};

// Smoothed max of affine functions: (amp/alpha) log sum exp(alpha * ell_i(x)).
// Convex for amp > 0; derivative jets are the cumulant tensors of the
// softmax distribution over the slopes.
class LogSumExpFn final : public SmoothFunction {
 public:
  LogSumExpFn(double amplitude, double alpha, std::vector<AffineFunction> pieces)
      : amp_(amplitude), alpha_(alpha), pieces_(std::move(pieces)) {}
  int dim() const override { return pieces_.front().rank(); }
  void eval(const Vec& x, Jet4& jet) const override;
  std::string kind() const override { return "lse_max"; }
  double amplitude() const { return amp_; }
  double alpha() const { return alpha_; }
  const std::vector<AffineFunction>& pieces() const { return pieces_; }

 private:
  double amp_, alpha_;
  std::vector<AffineFunction> pieces_;
};

class SumFn final : public SmoothFunction {
 public:
  explicit SumFn(std::vector<SmoothFnPtr> terms) : terms_(std::move(terms)) {}
  int dim() const override { return terms_.front()->dim(); }
  void eval(const Vec& x, Jet4& jet) const override {
    jet = Jet4(dim());
    Jet4 t(dim());
    for (const auto& f : terms_) {
      f->eval(x, t);
      jet.add_scaled(t, 1.0);
    }
  }
  std::string kind() const override { return "sum"; }
  const std::vector<SmoothFnPtr>& terms() const { return terms_; }

 private:
  std::vector<SmoothFnPtr> terms_;
};

class ScaledFn final : public SmoothFunction {
 public:
  ScaledFn(SmoothFnPtr f, double t) : f_(std::move(f)), t_(t) {}
  int dim() const override { return f_->dim(); }
  void eval(const Vec& x, Jet4& jet) const override {
    jet = Jet4(dim());
    Jet4 tmp(dim());
    f_->eval(x, tmp);
    jet.add_scaled(tmp, t_);
  }
  std::string kind() const override { return "scaled"; }
  const SmoothFnPtr& inner() const { return f_; }
  double factor() const { return t_; }

 private:
  SmoothFnPtr f_;
  double t_;
};

inline SmoothFnPtr make_zero(int k) { return std::make_shared<ZeroFn>(k); }
inline SmoothFnPtr make_scaled(SmoothFnPtr f, double t) {
  return std::make_shared<ScaledFn>(std::move(f), t);
}
inline SmoothFnPtr make_sum(std::vector<SmoothFnPtr> terms) {
  return std::make_shared<SumFn>(std::move(terms));
}

}  // namespace wkl
