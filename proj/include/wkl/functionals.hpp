#pragma once

// Scalar functionals of the weighted calculus: Monge-Ampere energies E, E_g,
// twisted energies E_v^Theta and the Ricci energy R_v, the Darvas metric d_1
// with rooftop envelopes, I/J/I_1, relative entropy, Duistermaat-Heckman
// integrals and pushforwards, the Futaki-Mabuchi pairing with the extremal
// affine function, and the weighted Mabuchi energies.
//
// Every functional with an exact moment-coordinate formula is computed there
// by default; the s-grid quadrature is the independent oracle, enabled by
// the cross-check flag, and every s-grid value carries a tail estimate.

#include <optional>
#include <string>
#include <vector>

#include "wkl/density.hpp"
#include "wkl/ma_ops.hpp"
#include "wkl/torus.hpp"

namespace wkl {

// A fixture bundles the immutable background of one experiment: polytope,
// Guillemin reference state (whose MA(0) is the reference measure nu_X),
// weights, and the shared x-quadrature.
struct Fixture {
  std::string name;
  std::shared_ptr<const Polytope> polytope;
  StatePtr reference;
  WeightPtr v, w;
  std::shared_ptr<const QuadratureRule> xquad;
  SGridSpec sgrid;
};

Fixture make_fixture(std::string name, std::shared_ptr<const Polytope> p, WeightPtr v,
                     WeightPtr w, const SGridSpec& grid, int quad_order = 8);

struct FunctionalReport {
  std::string name;
  double value = 0;
  std::string path;  // "x-grid", "s-grid" or "both"
  double discrepancy = 0;
  double tail = 0;
  bool flagged = false;
};

// ---- Monge-Ampere energies ------------------------------------------------

// E(phi) = -int_P (G_phi - G_ref) dx, normalized by E(0) = 0. With
// cross_check, the s-grid route through the mixed-Hessian expansion of
// E(phi) - E(0) is evaluated and compared.
FunctionalReport energy(const Fixture& fx, const KahlerState& phi, bool cross_check = false);

// E_g(phi) = -int_P g (G_phi - G_ref) dx for a smooth g on P.
FunctionalReport weighted_energy(const Fixture& fx, const KahlerState& phi, const Weight& g,
                                 bool cross_check = false);

// E_v^Theta(phi), by the exact-difference formula int f (MA_v(phi)-MA_v(0))
// for exact twists and by the segment quadrature of the twisted operator in
// general. R_v(phi) is the case Theta = -Ric^T(nu_X).
FunctionalReport twisted_energy(const Fixture& fx, const KahlerState& phi, const Weight& v,
                                const EquivariantTwist& theta, bool cross_check = false);
double ricci_energy(const Fixture& fx, const KahlerState& phi, const WeightPtr& v);

// ---- Darvas metric and friends ---------------------------------------------

// Pointwise max of the two symplectic potentials on the x-quadrature (the
// rooftop envelope of the two potentials lives on the symplectic side).
std::vector<double> rooftop_envelope(const Fixture& fx, const KahlerState& a, const KahlerState& b);

struct D1Report {
  double value = 0;        // Darvas-formula route E(a)+E(b)-2E(env)
  double l1 = 0;           // int |G_a - G_b| dx
  double discrepancy = 0;  // |value - l1|
};
D1Report d1(const Fixture& fx, const KahlerState& a, const KahlerState& b);

struct IJReport {
  double I = 0;       // int (phi-psi)(MA(psi)-MA(phi))
  double I1 = 0;      // int |phi-psi| (MA(phi)+MA(psi))
  double J_a = 0;     // J(phi) = int phi omega^n - E(phi)
  double tail = 0;
};
IJReport i_j_i1(const Fixture& fx, const KahlerState& a, const KahlerState& b);

// sup_X (phi_a - phi_b) = sup_P (G_b - G_a), exact on the x-grid.
double sup_difference(const Fixture& fx, const KahlerState& a, const KahlerState& b);
// int (phi_a - phi_b) dMA(reference) by s-grid quadrature.
double mean_difference(const Fixture& fx, const KahlerState& a, const KahlerState& b);

// ---- Entropy ----------------------------------------------------------------

// Ent(mu | nu) = int log(mu/nu) dmu over a shared s-grid; +inf when mu is not
// dominated by nu on the grid support.
double relative_entropy(const DensityField& mu, const DensityField& nu);

struct EntropyReport {
  double value = 0;  // ent_v(phi) = (1/2) Ent(MA_v(phi) | nu_X)
  double x_path = 0;
  double s_path = 0;
  double discrepancy = 0;
  double tail = 0;
};
EntropyReport weighted_entropy(const Fixture& fx, const KahlerState& phi, const WeightPtr& v);

// ---- Duistermaat-Heckman ----------------------------------------------------

FunctionalReport dh_integral(const Fixture& fx, const Weight& g);

struct Histogram {
  int bins_per_dim = 0;
  Vec lo, hi;                  // bounding box of P
  std::vector<double> mass;    // bins^k cells, row-major
  std::vector<Vec> centers;
};
Histogram dh_pushforward(const Fixture& fx, const KahlerState& phi, int bins);
Histogram lebesgue_histogram(const Fixture& fx, int bins);

// Exact 1-Wasserstein distance upper bound between two histograms on the
// same cells: min-cost flow on the 8-neighbor cell graph with Euclidean arc
// costs (overshoots the straight-line metric by at most the octile factor).
double w1_distance(const Histogram& a, const Histogram& b);

// ---- Futaki-Mabuchi pairing and Mabuchi energies -----------------------------

struct PairingMatrix {
  Mat gram;            // (k+1)x(k+1), basis (xi_1..xi_k, 1)
  Vec rhs;             // int ell_i(m) S_v MA_v(0)
  double min_eigen = 0;
  double condition = 0;
  bool flagged = false;  // ill-conditioned
};

PairingMatrix futaki_mabuchi(const Fixture& fx);
AffineFunction extremal_function(const Fixture& fx);

// Fut(ell) = int ell(m) w(m) MA_v(0) - int ell(m) S_v MA_v(0).
double futaki_invariant(const Fixture& fx, const AffineFunction& ell);

struct MabuchiReport {
  double entropy = 0;  // ent_v
  double ricci = 0;    // R_v
  double energy = 0;   // E_{vw} (or E_{v w ell_ext} for the relative energy)
  double value = 0;
  double tail = 0;
};

MabuchiReport mabuchi(const Fixture& fx, const KahlerState& phi);
MabuchiReport mabuchi_relative(const Fixture& fx, const KahlerState& phi,
                               const AffineFunction* ell_ext = nullptr);

// ---- Potentials perturbed by invariant functions ------------------------------

// Value of the symplectic potential of F_base + eps * f at the point x:
// Legendre transform solved by Newton in the log coordinates, seeded by the
// base state's own transform.
double perturbed_symplectic_value(const KahlerState& base, const ScalarField& f, double eps,
                                  const Vec& x);

// E_g(phi + eps f) along the x-grid (exact path), for derivative probes.
double weighted_energy_perturbed(const Fixture& fx, const KahlerState& phi, const Weight& g,
                                 const ScalarField& f, double eps);

// MA_v(phi + eps f) as an s-grid density (node-wise from the state jets).
DensityField ma_v_perturbed(const Fixture& fx, const StatePtr& phi, const WeightPtr& v,
                            const ScalarField& f, double eps);

// ent_v + R_v at phi + eps f (s-grid), the Euler-Lagrange pair of
// -S_v MA_v per the weighted Mabuchi splitting.
double entropy_plus_ricci_perturbed(const Fixture& fx, const KahlerState& phi, const WeightPtr& v,
                                    const ScalarField& f, double eps);

}  // namespace wkl
