#pragma once

// Measures produced by the Monge-Ampere operators, carried as densities on
// the owning state's s-grid (relative to ds, DH-normalized) and, when an
// exact pushforward formula exists, on an x-grid quadrature over P
// (relative to dx). Mass agreement between the two is the standing
// cross-check.

#include <memory>
#include <vector>

#include "wkl/polytope.hpp"
#include "wkl/state.hpp"

namespace wkl {

enum class MeasureTag { absolute, relative_to_reference };

struct IntegralResult {
  double value = 0;
  double tail = 0;  // estimated truncation error of the s-grid box
};

struct DensityField {
  StatePtr state;
  std::vector<double> s_density;  // density against ds at the grid nodes
  MeasureTag tag = MeasureTag::absolute;
  bool nonnegative = true;

  std::shared_ptr<const QuadratureRule> x_quad;  // optional exact pushforward
  std::vector<double> x_density;                 // density against dx

  double mass_s = 0;
  double mass_x = 0;
  double tail_estimate = 0;

  int nodes() const { return static_cast<int>(s_density.size()); }
};

// Trapezoid sum of integrand values over the state's s-grid, with a
// geometric-decay tail estimate from the outer two node shells.
IntegralResult integrate_s(const KahlerState& st, const std::vector<double>& values);

// Integral of f d(mu) for a density field on the s-grid.
IntegralResult integrate_against(const DensityField& mu, const std::vector<double>& f_values);

}  // namespace wkl
