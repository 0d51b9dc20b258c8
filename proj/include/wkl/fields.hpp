#pragma once

// Torus-invariant scalar functions on X presented in log coordinates:
// anything that can report value, s-gradient and s-Hessian at a point. These
// feed exact twists dd^c_T f (whose moment part is m_f = grad_s f), weighted
// Laplacians, and the Euler-Lagrange test payloads.

#include <memory>

#include "wkl/state.hpp"
#include "wkl/weights.hpp"

namespace wkl {

struct SJet2 {
  double value = 0;
  Vec grad;
  Mat hess;
  explicit SJet2(int k = 0) : grad(k), hess(k) {}
};

class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual int dim() const = 0;
  virtual SJet2 jet_s(const Vec& s) const = 0;
  double value_s(const Vec& s) const { return jet_s(s).value; }
};

using ScalarFieldPtr = std::shared_ptr<const ScalarField>;

namespace detail {

// Jets of a state at arbitrary s, using the cached node when s lies on the
// state's own grid.
inline StateJet state_jet_at(const KahlerState& st, const Vec& s, int order) {
  const int n = st.grid().nodes;
  const double h = 2.0 * st.grid().box / (n - 1);
  int node = 0;
  bool aligned = true;
  int stride = 1;
  for (int d = 0; d < st.dim(); ++d) {
    const double pos = (s[d] + st.grid().box) / h;
    const int i = static_cast<int>(std::lround(pos));
    if (i < 0 || i >= n || std::fabs(pos - i) > 1e-12) {
      aligned = false;
      break;
    }
    node += stride * i;
    stride *= n;
  }
  if (aligned) return st.jet_at(node, order);
  return st.jet_at_s(s, order);
}

}  // namespace detail

// rho(s) = scale * ( (1/2) log det Hess F(s) + (1/2) log v(m(s)) ), the Ricci
// potential of MA_v(0) of the carried state (v optional).
class RicciPotentialField final : public ScalarField {
 public:
  RicciPotentialField(StatePtr st, WeightPtr v, double scale = 1.0)
      : st_(std::move(st)), v_(std::move(v)), scale_(scale) {}
  int dim() const override { return st_->dim(); }
  SJet2 jet_s(const Vec& s) const override;

 private:
  StatePtr st_;
  WeightPtr v_;  // may be null for the unweighted volume density
  double scale_;
};

// phi(s) = F_a(s) - F_b(s): relative Kahler potential of two states.
class PotentialDiffField final : public ScalarField {
 public:
  PotentialDiffField(StatePtr a, StatePtr b) : a_(std::move(a)), b_(std::move(b)) {}
  int dim() const override { return a_->dim(); }
  SJet2 jet_s(const Vec& s) const override {
    StateJet ja = detail::state_jet_at(*a_, s, 2);
    StateJet jb = detail::state_jet_at(*b_, s, 2);
    SJet2 out(dim());
    out.value = ja.F - jb.F;
    out.grad = ja.x - jb.x;
    out.hess = ja.H - jb.H;
    return out;
  }

 private:
  StatePtr a_, b_;
};

// g(m(s)) for a weight g composed with the moment map of a fixed state.
class ComposedWeightField final : public ScalarField {
 public:
  ComposedWeightField(WeightPtr g, StatePtr st) : g_(std::move(g)), st_(std::move(st)) {}
  int dim() const override { return st_->dim(); }
  SJet2 jet_s(const Vec& s) const override;

 private:
  WeightPtr g_;
  StatePtr st_;
};

// A closed-form function of the log coordinates themselves.
class AnalyticSField final : public ScalarField {
 public:
  explicit AnalyticSField(SmoothFnPtr f) : f_(std::move(f)) {}
  int dim() const override { return f_->dim(); }
  SJet2 jet_s(const Vec& s) const override {
    Jet4 j(dim());
    f_->eval(s, j);
    SJet2 out(dim());
    out.value = j.value;
    out.grad = j.grad;
    out.hess = j.hess;
    return out;
  }

 private:
  SmoothFnPtr f_;
};

class ScaledField final : public ScalarField {
 public:
  ScaledField(ScalarFieldPtr f, double t) : f_(std::move(f)), t_(t) {}
  int dim() const override { return f_->dim(); }
  SJet2 jet_s(const Vec& s) const override {
    SJet2 j = f_->jet_s(s);
    j.value *= t_;
    j.grad *= t_;
    j.hess *= t_;
    return j;
  }

 private:
  ScalarFieldPtr f_;
  double t_;
};

class SumField final : public ScalarField {
 public:
  SumField(ScalarFieldPtr a, ScalarFieldPtr b) : a_(std::move(a)), b_(std::move(b)) {}
  int dim() const override { return a_->dim(); }
  SJet2 jet_s(const Vec& s) const override {
    SJet2 ja = a_->jet_s(s), jb = b_->jet_s(s);
    ja.value += jb.value;
    ja.grad += jb.grad;
    ja.hess += jb.hess;
    return ja;
  }

 private:
  ScalarFieldPtr a_, b_;
};

inline ScalarFieldPtr make_ricci_potential(StatePtr st, WeightPtr v = nullptr, double scale = 1.0) {
  return std::make_shared<RicciPotentialField>(std::move(st), std::move(v), scale);
}
inline ScalarFieldPtr make_potential_diff(StatePtr a, StatePtr b) {
  return std::make_shared<PotentialDiffField>(std::move(a), std::move(b));
}
inline ScalarFieldPtr make_composed_weight(WeightPtr g, StatePtr st) {
  return std::make_shared<ComposedWeightField>(std::move(g), std::move(st));
}
inline ScalarFieldPtr make_analytic_sfield(SmoothFnPtr f) {
  return std::make_shared<AnalyticSField>(std::move(f));
}
inline ScalarFieldPtr scale_field(ScalarFieldPtr f, double t) {
  return std::make_shared<ScaledField>(std::move(f), t);
}
inline ScalarFieldPtr add_fields(ScalarFieldPtr a, ScalarFieldPtr b) {
  return std::make_shared<SumField>(std::move(a), std::move(b));
}

}  // namespace wkl
