#pragma once

// Test-only oracles, independent of the library code paths they check:
// - slice-integration volume/barycenter oracle for H-polytopes;
// - central finite differences for derivative claims;
// - a deterministic RNG wrapper (raw mersenne bits only, no libstdc++
//   distribution dependence).

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "wkl/linalg.hpp"
#include "wkl/polytope.hpp"

namespace oracle {

using wkl::Mat;
using wkl::Vec;

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(uint64_t seed) : gen(seed) {}
  double uniform(double a = 0.0, double b = 1.0) {
    const double u = (gen() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
  }
  double normal() {
    double u1 = uniform(1e-17, 1.0), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
};

// H-representation slice integration: exact panels between vertex
// breakpoints, Gauss-Legendre of generous order inside each panel.
struct HRep {
  int dim;
  std::vector<Vec> normals;
  std::vector<double> offsets;
};

inline HRep hrep_of(const wkl::Polytope& p) {
  HRep h;
  h.dim = p.dim();
  for (const auto& f : p.facets()) {
    h.normals.push_back(f.normal);
    h.offsets.push_back(f.offset);
  }
  return h;
}

// Bounds of the 1-d slice of a 2-d H-polytope at x1 = t: returns false if
// the slice is empty or degenerate.
inline bool slice_bounds_2d(const HRep& h, double t, double& lo, double& hi) {
  lo = -1e300;
  hi = 1e300;
  for (size_t f = 0; f < h.normals.size(); ++f) {
    const double c = h.normals[f][1];
    const double rest = h.offsets[f] + h.normals[f][0] * t;
    if (std::fabs(c) < 1e-14) {
      if (rest < 0) return false;
      continue;
    }
    const double bound = -rest / c;
    if (c > 0) lo = std::max(lo, bound);
    else hi = std::min(hi, bound);
  }
  return hi > lo;
}

// Exact x1-breakpoints of a 2-d H-polytope: x-coordinates of all pairwise
// facet-line intersections inside the polytope.
inline std::vector<double> x1_breakpoints_2d(const HRep& h) {
  std::vector<double> bps;
  const size_t m = h.normals.size();
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j) {
      const double a11 = h.normals[i][0], a12 = h.normals[i][1];
      const double a21 = h.normals[j][0], a22 = h.normals[j][1];
      const double d = a11 * a22 - a12 * a21;
      if (std::fabs(d) < 1e-13) continue;
      const double x1 = (-h.offsets[i] * a22 + h.offsets[j] * a12) / d;
      bps.push_back(x1);
    }
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end(),
                        [](double a, double b) { return std::fabs(a - b) < 1e-11; }),
            bps.end());
  return bps;
}

// Triangulation-free volume oracle: slice integration with exact panel
// breakpoints (slice length is affine in x1 between breakpoints, so a short
// Gauss rule is exact). Dimensions 1 and 2.
inline double volume_oracle(const wkl::Polytope& p) {
  HRep h = hrep_of(p);
  if (p.dim() == 1) {
    double lo = -1e300, hi = 1e300;
    for (size_t i = 0; i < h.normals.size(); ++i) {
      const double c = h.normals[i][0];
      const double bound = -h.offsets[i] / c;
      if (c > 0) lo = std::max(lo, bound);
      else hi = std::min(hi, bound);
    }
    return std::max(0.0, hi - lo);
  }
  std::vector<double> bps = x1_breakpoints_2d(h);
  std::vector<double> gn, gw;
  wkl::gauss_legendre(6, gn, gw);
  double total = 0;
  for (size_t pnl = 0; pnl + 1 < bps.size(); ++pnl) {
    const double a = bps[pnl], b = bps[pnl + 1];
    for (size_t i = 0; i < gn.size(); ++i) {
      const double t = 0.5 * (a + b) + 0.5 * (b - a) * gn[i];
      double lo, hi;
      if (slice_bounds_2d(h, t, lo, hi)) total += 0.5 * (b - a) * gw[i] * (hi - lo);
    }
  }
  return total;
}

inline Vec barycenter_oracle(const wkl::Polytope& p) {
  HRep h = hrep_of(p);
  if (p.dim() == 1) {
    double lo = -1e300, hi = 1e300;
    for (size_t i = 0; i < h.normals.size(); ++i) {
      const double c = h.normals[i][0];
      const double bound = -h.offsets[i] / c;
      if (c > 0) lo = std::max(lo, bound);
      else hi = std::min(hi, bound);
    }
    Vec b(1);
    b[0] = 0.5 * (lo + hi);
    return b;
  }
  std::vector<double> bps = x1_breakpoints_2d(h);
  std::vector<double> gn, gw;
  wkl::gauss_legendre(6, gn, gw);
  Vec num(2);
  double den = 0;
  for (size_t pnl = 0; pnl + 1 < bps.size(); ++pnl) {
    const double a = bps[pnl], b = bps[pnl + 1];
    for (size_t i = 0; i < gn.size(); ++i) {
      const double t = 0.5 * (a + b) + 0.5 * (b - a) * gn[i];
      const double wq = 0.5 * (b - a) * gw[i];
      double lo, hi;
      if (!slice_bounds_2d(h, t, lo, hi)) continue;
      const double len = hi - lo;
      den += wq * len;
      num[0] += wq * len * t;
      num[1] += wq * len * 0.5 * (lo + hi);
    }
  }
  num *= 1.0 / den;
  return num;
}

// Central finite differences.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h = 1e-5) {
  Vec g(x.n);
  for (int d = 0; d < x.n; ++d) {
    Vec xp = x, xm = x;
    xp[d] += h;
    xm[d] -= h;
    g[d] = (f(xp) - f(xm)) / (2 * h);
  }
  return g;
}

inline Mat fd_hessian(const std::function<double(const Vec&)>& f, const Vec& x, double h = 1e-4) {
  Mat m(x.n);
  for (int a = 0; a < x.n; ++a)
    for (int b = 0; b < x.n; ++b) {
      Vec xpp = x, xpm = x, xmp = x, xmm = x;
      xpp[a] += h; xpp[b] += h;
      xpm[a] += h; xpm[b] -= h;
      xmp[a] -= h; xmp[b] += h;
      xmm[a] -= h; xmm[b] -= h;
      m(a, b) = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4 * h * h);
    }
  return m;
}

}  // namespace oracle
