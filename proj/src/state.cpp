#include "wkl/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <cstdio>

namespace wkl {

namespace {

// Flattened tensor-grid indexing helpers.
struct GridIndex {
  int k, n;
  int flatten(const std::array<int, 3>& idx) const {
    int f = 0;
    for (int d = k - 1; d >= 0; --d) f = f * n + idx[static_cast<size_t>(d)];
    return f;
  }
  std::array<int, 3> unflatten(int f) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int d = 0; d < k; ++d) {
      idx[static_cast<size_t>(d)] = f % n;
      f /= n;
    }
    return idx;
  }
};

}  // namespace

KahlerState::KahlerState(SymplecticPotential g, SGridSpec grid)
    : g_(std::move(g)), grid_(grid) {
  if (grid_.nodes < 5) throw std::runtime_error("s-grid too small");
  build();
}

Vec KahlerState::s_of(int node) const {
  const int k = dim();
  GridIndex gi{k, grid_.nodes};
  const auto idx = gi.unflatten(node);
  const double h = 2.0 * grid_.box / (grid_.nodes - 1);
  Vec s(k);
  for (int d = 0; d < k; ++d) s[d] = -grid_.box + h * idx[static_cast<size_t>(d)];
  return s;
}

bool KahlerState::is_boundary_node(int node) const {
  GridIndex gi{dim(), grid_.nodes};
  const auto idx = gi.unflatten(node);
  for (int d = 0; d < dim(); ++d)
    if (idx[static_cast<size_t>(d)] == 0 || idx[static_cast<size_t>(d)] == grid_.nodes - 1) return true;
  return false;
}

bool KahlerState::is_next_boundary_node(int node) const {
  if (is_boundary_node(node)) return false;
  GridIndex gi{dim(), grid_.nodes};
  const auto idx = gi.unflatten(node);
  for (int d = 0; d < dim(); ++d)
    if (idx[static_cast<size_t>(d)] == 1 || idx[static_cast<size_t>(d)] == grid_.nodes - 2) return true;
  return false;
}

Vec KahlerState::solve_legendre(const Vec& s, Vec seed, double* f_value) const {
  const Polytope& p = g_.polytope();
  const int k = dim();
  Vec x = seed;
  if (!(p.min_facet_value(x) > 0)) x = p.barycenter();

  Jet4 jet(k);
  const double tol = 1e-11 * (1.0 + norm_inf(s));
  double resid = 1e300;
  for (int iter = 0; iter < 400; ++iter) {
    g_.eval(x, jet, 1);
    Vec grad = jet.grad - s;
    const double r = norm_inf(grad);
    resid = std::min(resid, r);
    if (r <= tol) break;
    g_.eval(x, jet, 2);
    Vec dx = solve_spd(jet.hess, grad);
    dx *= -1.0;
    // Fraction-to-boundary damping: each facet value may shrink to 5% per
    // step, which reaches the exponentially thin boundary layers quickly
    // while keeping the iterate strictly interior.
    double t = 1.0;
    for (const Facet& f : p.facets()) {
      const double slope = dot(dx, f.normal);
      if (slope < 0.0) {
        const double ell = dot(x, f.normal) + f.offset;
        t = std::min(t, -0.95 * ell / slope);
      }
    }
    if (!(t > 0.0)) break;
    const Vec xp = x;
    x += t * dx;
    // Representability floor: no coordinate moved, nothing more to gain.
    bool moved = false;
    for (int d = 0; d < k; ++d) moved = moved || (x[d] != xp[d]);
    if (!moved) break;
  }
  if (resid > 1e-7 * (1.0 + norm_inf(s))) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "legendre solve did not converge (s=(%g,%g,%g), resid=%g)",
                  s[0], k > 1 ? s[1] : 0.0, k > 2 ? s[2] : 0.0, resid);
    throw std::runtime_error(buf);
  }
  if (f_value) *f_value = dot(s, x) - g_.value(x);
  return x;
}

void KahlerState::build() {
  const int k = dim();
  const int n = grid_.nodes;
  int total = 1;
  for (int d = 0; d < k; ++d) total *= n;
  xs_.assign(static_cast<size_t>(total), Vec(k));
  fs_.assign(static_cast<size_t>(total), 0.0);
  ws_.assign(static_cast<size_t>(total), 0.0);

  GridIndex gi{k, n};
  const double h = 2.0 * grid_.box / (n - 1);
  const int c = (n - 1) / 2;

  // Outward marching from the grid center, seeding each Newton solve from
  // the neighbor one step toward the center.
  std::vector<std::vector<int>> rings;
  for (int f = 0; f < total; ++f) {
    const auto idx = gi.unflatten(f);
    int r = 0;
    for (int d = 0; d < k; ++d) r = std::max(r, std::abs(idx[static_cast<size_t>(d)] - c));
    if (static_cast<int>(rings.size()) <= r) rings.resize(static_cast<size_t>(r) + 1);
    rings[static_cast<size_t>(r)].push_back(f);
  }

  const Polytope& p = g_.polytope();
  worst_residual_ = 0;
  for (size_t r = 0; r < rings.size(); ++r) {
    for (int f : rings[r]) {
      const auto idx = gi.unflatten(f);
      Vec seed(k);
      if (r == 0) {
        seed = p.barycenter();
      } else {
        auto par = idx;
        for (int d = 0; d < k; ++d) {
          const int off = idx[static_cast<size_t>(d)] - c;
          if (std::abs(off) == static_cast<int>(r))
            par[static_cast<size_t>(d)] = idx[static_cast<size_t>(d)] - (off > 0 ? 1 : -1);
        }
        seed = xs_[static_cast<size_t>(gi.flatten(par))];
      }
      Vec s(k);
      for (int d = 0; d < k; ++d) s[d] = -grid_.box + h * idx[static_cast<size_t>(d)];
      double fv = 0;
      const Vec x = solve_legendre(s, seed, &fv);
      xs_[static_cast<size_t>(f)] = x;
      fs_[static_cast<size_t>(f)] = fv;
      Jet4 jet(k);
      g_.eval(x, jet, 2);
      worst_residual_ = std::max(worst_residual_, norm_inf(jet.grad - s));
      // Trapezoid weight.
      double w = 1.0;
      for (int d = 0; d < k; ++d) {
        const int id = idx[static_cast<size_t>(d)];
        w *= (id == 0 || id == n - 1) ? 0.5 * h : h;
      }
      ws_[static_cast<size_t>(f)] = w;
    }
  }
}

namespace {

// Assemble F-jets at one point from the G-jets: Hess F = (Hess G)^{-1} at
// x = grad F(s), with the third and fourth derivatives obtained by
// differentiating grad G(x(s)) = s. Products are grouped through the
// x-derivatives of H = (Hess G)^{-1}, whose entries stay bounded near the
// facets; direct conjugation of the raw G-tensors would lose the far grid
// tails to rounding.
StateJet assemble_jet(const SymplecticPotential& g, const Vec& s, const Vec& x, double f,
                      int order) {
  const int k = g.dim();
  StateJet sj;
  sj.s = s;
  sj.x = x;
  sj.F = f;
  Jet4 gj(k);
  g.eval(x, gj, std::max(2, order));
  sj.Hinv = gj.hess;
  sj.H = inverse(gj.hess);
  sj.logdetH = -logdet_spd(gj.hess);
  if (order < 3) return sj;

  std::array<Mat, 3> g3;
  for (int e = 0; e < k; ++e) {
    g3[static_cast<size_t>(e)] = Mat(k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) g3[static_cast<size_t>(e)](i, j) = gj.d3(i, j, e);
  }
  std::array<Mat, 3> dh;  // dH/dx_e = -H G3_e H
  for (int e = 0; e < k; ++e) {
    Mat m = mul(mul(sj.H, g3[static_cast<size_t>(e)]), sj.H);
    m *= -1.0;
    dh[static_cast<size_t>(e)] = m;
  }
  sj.F3 = Ten3(k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c) {
        double t = 0;
        for (int e = 0; e < k; ++e) t += dh[static_cast<size_t>(e)](a, b) * sj.H(e, c);
        sj.F3(a, b, c) = t;
      }
  if (order < 4) return sj;

  // d2H[c][e] = d^2 H / dx_c dx_e.
  std::array<std::array<Mat, 3>, 3> d2h;
  for (int c = 0; c < k; ++c)
    for (int e = 0; e < k; ++e) {
      Mat g4ce(k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) g4ce(i, j) = gj.d4(i, j, c, e);
      Mat m = mul(mul(dh[static_cast<size_t>(e)], g3[static_cast<size_t>(c)]), sj.H);
      Mat m2 = mul(mul(sj.H, g3[static_cast<size_t>(c)]), dh[static_cast<size_t>(e)]);
      Mat m3 = mul(mul(sj.H, g4ce), sj.H);
      Mat acc = m;
      acc += m2;
      acc += m3;
      acc *= -1.0;
      d2h[static_cast<size_t>(c)][static_cast<size_t>(e)] = acc;
    }
  // F4_{abcd} = sum_e [ sum_c' ( d2H[c'][e]_{ab} H_{c'c} + dH[c']_{ab} dH[e]_{c'c} ) ] H_{ed}
  sj.F4 = Ten4(k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c)
        for (int d = 0; d < k; ++d) {
          double t = 0;
          for (int e = 0; e < k; ++e) {
            double inner = 0;
            for (int cp = 0; cp < k; ++cp)
              inner += d2h[static_cast<size_t>(cp)][static_cast<size_t>(e)](a, b) * sj.H(cp, c) +
                       dh[static_cast<size_t>(cp)](a, b) * dh[static_cast<size_t>(e)](cp, c);
            t += inner * sj.H(e, d);
          }
          sj.F4(a, b, c, d) = t;
        }
  sj.has_f34 = true;
  return sj;
}

}  // namespace

StateJet KahlerState::jet_at(int node, int order) const {
  return assemble_jet(g_, s_of(node), xs_[static_cast<size_t>(node)],
                      fs_[static_cast<size_t>(node)], order);
}

StateJet KahlerState::jet_at_s(const Vec& s, int order) const {
  double fv = 0;
  const Vec x = moment_of(s, &fv);
  return assemble_jet(g_, s, x, fv, order);
}

Vec KahlerState::moment_of(const Vec& s, double* f_value) const {
  const int k = dim();
  const int n = grid_.nodes;
  const double h = 2.0 * grid_.box / (n - 1);
  GridIndex gi{k, n};
  std::array<int, 3> idx{0, 0, 0};
  for (int d = 0; d < k; ++d) {
    int i = static_cast<int>(std::lround((s[d] + grid_.box) / h));
    idx[static_cast<size_t>(d)] = std::clamp(i, 0, n - 1);
  }
  const Vec seed = xs_[static_cast<size_t>(gi.flatten(idx))];
  return solve_legendre(s, seed, f_value);
}

double KahlerState::kahler_potential(const Vec& s) const {
  double f = 0;
  moment_of(s, &f);
  return f;
}

double KahlerState::tail_decay_hint() const {
  double outer = 0, inner = 0;
  for (int i = 0; i < node_count(); ++i) {
    const StateJet sj = jet_at(i, 2);
    const double mass = std::exp(sj.logdetH) * quad_weight(i);
    if (is_boundary_node(i)) outer += mass;
    else if (is_next_boundary_node(i)) inner += mass;
  }
  return inner > 0 ? outer / inner : 0.0;
}

StatePtr guillemin_state(std::shared_ptr<const Polytope> p, const SGridSpec& grid) {
  return std::make_shared<KahlerState>(guillemin_potential(std::move(p)), grid);
}

StatePtr perturb_state(const KahlerState& base, SmoothFnPtr h) {
  SymplecticPotential g = base.potential().with_correction(std::move(h));
  g.check_convexity();
  return std::make_shared<KahlerState>(std::move(g), base.grid());
}

StatePtr torus_translate(const KahlerState& base, const Vec& a) {
  const Vec xbar = base.polytope().barycenter();
  SymplecticPotential g = base.potential().with_affine(a, dot(a, xbar));
  return std::make_shared<KahlerState>(std::move(g), base.grid());
}

std::vector<double> kahler_potential_of(const KahlerState& state, const KahlerState& reference) {
  if (state.grid().nodes != reference.grid().nodes ||
      state.grid().box != reference.grid().box)
    throw std::runtime_error("incompatible grids");
  std::vector<double> phi(static_cast<size_t>(reference.node_count()));
  for (int i = 0; i < reference.node_count(); ++i)
    phi[static_cast<size_t>(i)] = state.f_of(i) - reference.f_of(i);
  return phi;
}

}  // namespace wkl
