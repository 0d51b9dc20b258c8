#pragma once

// KahlerState: the dual-grid realization of one torus-invariant Kahler form.
// The symplectic potential G lives on P; the Kahler potential F lives on a
// truncated log-coordinate grid [-L, L]^k and is produced by the Legendre
// transform F(s) = sup_x (<s,x> - G(x)), solved by damped Newton per node.
// The moment map is m(s) = grad F(s), with Hess F = (Hess G)^{-1} at the
// transported point; third and fourth s-derivatives of F are assembled from
// the analytic jets of G.
//
// All values are immutable after construction.

#include <memory>
#include <vector>

#include "wkl/symplectic.hpp"

namespace wkl {

struct SGridSpec {
  double box = 6.0;   // grid covers [-box, box]^k
  int nodes = 65;     // per dimension
};

// Pointwise state data at one log-coordinate s.
struct StateJet {
  Vec s;
  Vec x;          // moment point grad F(s)
  double F = 0;   // Kahler potential value
  Mat H;          // Hess F(s)
  Mat Hinv;       // Hess G(x)
  double logdetH = 0;
  Ten3 F3;
  Ten4 F4;
  bool has_f34 = false;
};

class KahlerState {
 public:
  KahlerState(SymplecticPotential g, SGridSpec grid);

  int dim() const { return g_.dim(); }
  const SymplecticPotential& potential() const { return g_; }
  const Polytope& polytope() const { return g_.polytope(); }
  const SGridSpec& grid() const { return grid_; }

  int node_count() const { return static_cast<int>(xs_.size()); }
  int nodes_per_dim() const { return grid_.nodes; }
  Vec s_of(int node) const;
  const Vec& x_of(int node) const { return xs_[static_cast<size_t>(node)]; }
  double f_of(int node) const { return fs_[static_cast<size_t>(node)]; }
  // Trapezoid weight of the node in the s-grid quadrature (no density).
  double quad_weight(int node) const { return ws_[static_cast<size_t>(node)]; }
  // Nodes of the outermost grid shell (for tail-error estimates).
  bool is_boundary_node(int node) const;
  bool is_next_boundary_node(int node) const;

  // Full jet (F, grad, Hess, and optionally third/fourth derivatives).
  StateJet jet_at(int node, int order = 4) const;
  StateJet jet_at_s(const Vec& s, int order = 4) const;  // off-grid Legendre solve

  // Legendre transform at arbitrary s: returns moment point and F(s).
  Vec moment_of(const Vec& s, double* f_value = nullptr) const;
  // F(s) alone.
  double kahler_potential(const Vec& s) const;

  // Worst Newton residual |grad G(x) - s| over the grid.
  double legendre_residual() const { return worst_residual_; }

  double tail_decay_hint() const;

 private:
  void build();
  Vec solve_legendre(const Vec& s, Vec seed, double* f_value) const;

  SymplecticPotential g_;
  SGridSpec grid_;
  std::vector<Vec> xs_;
  std::vector<double> fs_;
  std::vector<double> ws_;
  double worst_residual_ = 0;
};

using StatePtr = std::shared_ptr<const KahlerState>;

// Guillemin reference state of P (h = 0).
StatePtr guillemin_state(std::shared_ptr<const Polytope> p, const SGridSpec& grid);

// New state with correction h added on top of `base` (same polytope/grid).
StatePtr perturb_state(const KahlerState& base, SmoothFnPtr h);

// Torus translation: G -> G - <a,x> + <a, xbar>, with xbar the DH barycenter,
// so that the induced cocycle potential has zero Monge-Ampere energy.
StatePtr torus_translate(const KahlerState& base, const Vec& a);

// phi(s) = F_state(s) - F_ref(s) sampled on the reference grid.
std::vector<double> kahler_potential_of(const KahlerState& state, const KahlerState& reference);

}  // namespace wkl
