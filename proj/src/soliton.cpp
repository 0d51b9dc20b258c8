#include "wkl/soliton.hpp"

#include <cmath>
#include <vector>

namespace wkl {

namespace {

bool tiny(double xi) { return std::fabs(xi) < 1e-7; }

}  // namespace

double SolitonSolution::w(double x) const {
  if (tiny(xi)) return 1.0 - x * x;
  return amp * std::exp(-xi * x) - 2.0 * x / xi + 2.0 / (xi * xi);
}

double SolitonSolution::dw(double x) const {
  if (tiny(xi)) return -2.0 * x;
  return -xi * amp * std::exp(-xi * x) - 2.0 / xi;
}

double SolitonSolution::d2w(double x) const {
  if (tiny(xi)) return -2.0;
  return xi * xi * amp * std::exp(-xi * x);
}

SolitonSolution solve_soliton_1d(double xi) {
  SolitonSolution s;
  s.xi = xi;
  if (tiny(xi)) {
    s.tau = 0;
    s.x_left = -1;
    s.x_right = 1;
    s.amp = 0;
    return s;
  }
  // coth with a stable series near zero (|xi| >= 1e-7 here, still guard).
  const double c = std::fabs(xi) < 1e-4
                       ? 1.0 / xi + xi / 3.0 - xi * xi * xi / 45.0
                       : std::cosh(xi) / std::sinh(xi);
  s.tau = 1.0 / xi - c;
  s.x_left = s.tau - 1.0;
  s.x_right = s.tau + 1.0;
  s.amp = (2.0 * s.x_left / xi - 2.0 / (xi * xi)) * std::exp(xi * s.x_left);
  return s;
}

std::shared_ptr<const Polytope> soliton_polytope(const SolitonSolution& sol) {
  // Labels u = -1/root give both facets offset exactly one.
  const double ul = -1.0 / sol.x_left;   // > 0
  const double ur = -1.0 / sol.x_right;  // < 0
  std::vector<Facet> fs{{Vec{ul}, 1.0}, {Vec{ur}, 1.0}};
  return std::make_shared<Polytope>(1, std::move(fs));
}

namespace {

// h = G_sol - G_can with G_sol'' = 1/W; second to fourth derivatives are
// closed-form, value/slope come from prefix panel quadrature.
class SolitonCorrection final : public SmoothFunction {
 public:
  SolitonCorrection(SolitonSolution sol, std::shared_ptr<const Polytope> p)
      : sol_(sol), p_(std::move(p)) {
    build_prefix();
  }

  int dim() const override { return 1; }
  std::string kind() const override { return "soliton_correction"; }

  void eval(const Vec& x, Jet4& jet) const override {
    jet = Jet4(1);
    const double t = x[0];
    jet.value = value_at(t);
    jet.grad[0] = slope_at(t);
    jet.hess(0, 0) = h2(t);
    jet.d3(0, 0, 0) = h3(t);
    jet.d4(0, 0, 0, 0) = h4(t);
  }

 private:
  double gcan2(double x, int order) const {
    double r = 0;
    for (const Facet& f : p_->facets()) {
      const double u = f.normal[0];
      const double l = u * x + f.offset;
      switch (order) {
        case 2: r += 0.5 * u * u / l; break;
        case 3: r += -0.5 * u * u * u / (l * l); break;
        default: r += u * u * u * u / (l * l * l); break;
      }
    }
    return r;
  }
  double h2(double x) const { return 1.0 / sol_.w(x) - gcan2(x, 2); }
  double h3(double x) const {
    const double w = sol_.w(x);
    return -sol_.dw(x) / (w * w) - gcan2(x, 3);
  }
  double h4(double x) const {
    const double w = sol_.w(x), dw = sol_.dw(x);
    return (2.0 * dw * dw - w * sol_.d2w(x)) / (w * w * w) - gcan2(x, 4);
  }

  void build_prefix() {
    gauss_legendre(12, gn_, gw_);
    const double a = sol_.x_left, b = sol_.x_right;
    panels_ = 512;
    dx_ = (b - a) / panels_;
    // prefix integrals of h'' and t h'' from x_left up to each panel edge
    pre0_.assign(static_cast<size_t>(panels_) + 1, 0.0);
    pre1_.assign(static_cast<size_t>(panels_) + 1, 0.0);
    for (int p = 0; p < panels_; ++p) {
      const double lo = a + p * dx_, hi = lo + dx_;
      double s0 = 0, s1 = 0;
      for (size_t i = 0; i < gn_.size(); ++i) {
        const double t = 0.5 * (lo + hi) + 0.5 * dx_ * gn_[i];
        const double d = 0.5 * dx_ * gw_[i] * h2(t);
        s0 += d;
        s1 += d * t;
      }
      pre0_[static_cast<size_t>(p) + 1] = pre0_[static_cast<size_t>(p)] + s0;
      pre1_[static_cast<size_t>(p) + 1] = pre1_[static_cast<size_t>(p)] + s1;
    }
    // anchor the gauge at the midpoint tau
    anchor0_ = integral0_to(sol_.tau);
    anchor1_ = integral1_to(sol_.tau);
  }

  double integral0_to(double x) const { return partial(x, false); }
  double integral1_to(double x) const { return partial(x, true); }

  double partial(double x, bool weighted) const {
    const double a = sol_.x_left;
    const double pos = (x - a) / dx_;
    int p = static_cast<int>(pos);
    p = std::min(std::max(p, 0), panels_ - 1);
    double s = weighted ? pre1_[static_cast<size_t>(p)] : pre0_[static_cast<size_t>(p)];
    const double lo = a + p * dx_;
    for (size_t i = 0; i < gn_.size(); ++i) {
      const double t = 0.5 * (lo + x) + 0.5 * (x - lo) * gn_[i];
      const double d = 0.5 * (x - lo) * gw_[i] * h2(t);
      s += weighted ? d * t : d;
    }
    return s;
  }

  double slope_at(double x) const { return integral0_to(x) - anchor0_; }
  double value_at(double x) const {
    // h(x) = int_tau^x (x - t) h''(t) dt
    const double i0 = integral0_to(x) - anchor0_;
    const double i1 = integral1_to(x) - anchor1_;
    return x * i0 - i1;
  }

  SolitonSolution sol_;
  std::shared_ptr<const Polytope> p_;
  std::vector<double> gn_, gw_;
  std::vector<double> pre0_, pre1_;
  double anchor0_ = 0, anchor1_ = 0, dx_ = 0;
  int panels_ = 0;
};

}  // namespace

SmoothFnPtr soliton_correction(const SolitonSolution& sol) {
  return std::make_shared<SolitonCorrection>(sol, soliton_polytope(sol));
}

StatePtr soliton_state(double xi, const SGridSpec& grid) {
  SolitonSolution sol = solve_soliton_1d(xi);
  auto p = soliton_polytope(sol);
  SymplecticPotential g(p, soliton_correction(sol));
  return std::make_shared<KahlerState>(std::move(g), grid);
}

}  // namespace wkl
