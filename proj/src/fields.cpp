#include "wkl/fields.hpp"

#include "wkl/ma_ops.hpp"

namespace wkl {

namespace {

CurvPoint curv_at(const KahlerState& st, const Vec& s) {
  const StateJet j = detail::state_jet_at(st, s, 2);
  return curv_point(st.potential(), s, j.x);
}

}  // namespace

SJet2 RicciPotentialField::jet_s(const Vec& s) const {
  const CurvPoint c = curv_at(*st_, s);
  PotentialJets u = half_logdet_jets(c);
  SJet2 out(dim());
  out.value = u.value;
  out.grad = u.grad;
  out.hess = u.hess;
  if (v_) {
    const PotentialJets lw = half_logweight_jets(c, *v_);
    out.value += lw.value;
    out.grad += lw.grad;
    out.hess += lw.hess;
  }
  out.value *= scale_;
  out.grad *= scale_;
  out.hess *= scale_;
  return out;
}

SJet2 ComposedWeightField::jet_s(const Vec& s) const {
  const CurvPoint c = curv_at(*st_, s);
  const int k = dim();
  WeightJet wj;
  g_->eval(c.x, wj);
  SJet2 out(k);
  out.value = wj.value;
  out.grad = mul(c.H, wj.grad);
  Mat hgh = mul(mul(c.H, wj.hess), c.H);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      double f3 = 0;
      for (int ci = 0; ci < k; ++ci) f3 += c.F3(a, b, ci) * wj.grad[ci];
      out.hess(a, b) = f3 + hgh(a, b);
    }
  return out;
}

}  // namespace wkl
