#pragma once

// Equivariant twists Theta = (theta, m_Theta). The closed enumeration:
//   exact:              Theta = dd^c_T f for an invariant function f,
//                       so theta has s-Hessian Hess f and m_Theta = grad f;
//   ricci_of_reference: Theta = -Ric^T(nu_X) = dd^c_T rho_0 with rho_0 the
//                       Ricci potential (1/2) log det Hess F_ref;
//   state_form:         Theta = Omega_psi of another state, with s-Hessian
//                       Hess F_psi and moment grad F_psi.

#include <memory>

#include "wkl/fields.hpp"
#include "wkl/state.hpp"

namespace wkl {

enum class TwistKind { exact, ricci_of_reference, state_form };

struct TwistEval {
  Mat theta;   // s-Hessian of the local potential of theta
  Vec moment;  // m_Theta
};

class EquivariantTwist {
 public:
  static EquivariantTwist exact(ScalarFieldPtr f) {
    EquivariantTwist t;
    t.kind_ = TwistKind::exact;
    t.payload_ = std::move(f);
    return t;
  }
  static EquivariantTwist ricci_of_reference(StatePtr ref) {
    EquivariantTwist t;
    t.kind_ = TwistKind::ricci_of_reference;
    t.payload_ = make_ricci_potential(std::move(ref));
    return t;
  }
  static EquivariantTwist state_form(StatePtr psi) {
    EquivariantTwist t;
    t.kind_ = TwistKind::state_form;
    t.form_state_ = std::move(psi);
    return t;
  }
  static EquivariantTwist zero(int k) {
    return exact(make_analytic_sfield(make_zero(k)));
  }

  TwistKind kind() const { return kind_; }
  const ScalarFieldPtr& payload() const { return payload_; }
  const StatePtr& form_state() const { return form_state_; }

  TwistEval at(const Vec& s) const {
    TwistEval e;
    if (kind_ == TwistKind::state_form) {
      StateJet j = detail::state_jet_at(*form_state_, s, 2);
      e.theta = j.H;
      e.moment = j.x;
    } else {
      SJet2 j = payload_->jet_s(s);
      e.theta = j.hess;
      e.moment = j.grad;
    }
    return e;
  }

 private:
  TwistKind kind_ = TwistKind::exact;
  ScalarFieldPtr payload_;
  StatePtr form_state_;
};

}  // namespace wkl
