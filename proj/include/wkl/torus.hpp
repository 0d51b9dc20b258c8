#pragma once

// Torus Lie-algebra bookkeeping: the rank-k torus t with a fixed basis
// xi_1..xi_k, the dual pairing, and affine functions on t^vee.
//
// The norm on t is the Euclidean norm in the chosen basis; all probe
// constants downstream depend on this choice.

#include <string>
#include <vector>

#include "wkl/linalg.hpp"

namespace wkl {

struct TorusAlgebra {
  int rank = 1;
  std::vector<std::string> basis_labels;

  explicit TorusAlgebra(int k = 1) : rank(k) {
    for (int i = 0; i < k; ++i) basis_labels.push_back("xi_" + std::to_string(i + 1));
  }

  // Dual pairing <x, xi> of x in t^vee against xi in t (coordinates in the
  // fixed basis and its dual). Bilinear by construction.
  double pair(const Vec& x, const Vec& xi) const { return dot(x, xi); }
};

// ell(x) = <x, xi> + c on t^vee.
struct AffineFunction {
  Vec xi;   // linear part, element of t
  double c = 0.0;

  AffineFunction() = default;
  AffineFunction(Vec xi_, double c_) : xi(xi_), c(c_) {}
  static AffineFunction constant(int k, double c) { return {Vec::zero(k), c}; }

  int rank() const { return xi.n; }
  double operator()(const Vec& x) const { return dot(x, xi) + c; }

  bool is_zero() const {
    if (c != 0.0) return false;
    for (int i = 0; i < xi.n; ++i)
      if (xi[i] != 0.0) return false;
    return true;
  }

  AffineFunction& operator+=(const AffineFunction& o) {
    xi += o.xi;
    c += o.c;
    return *this;
  }
  friend AffineFunction operator+(AffineFunction a, const AffineFunction& b) { return a += b; }
  friend AffineFunction operator*(double t, AffineFunction a) {
    a.xi *= t;
    a.c *= t;
    return a;
  }
};

}  // namespace wkl
