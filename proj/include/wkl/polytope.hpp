#pragma once

// Moment polytopes in H-representation: x in P iff <x,u_i> + lambda_i >= 0
// for every facet i. Vertices are derived by facet-intersection enumeration
// (rank k <= 3 in scope). Interior quadrature triangulates P and applies a
// tensor Gauss-Legendre rule per simplex; boundary quadrature carries the
// lattice measure d(sigma) with d(x) = d(sigma) ^ d(ell_i) along facet i.

#include <stdexcept>
#include <string>
#include <vector>

#include "wkl/linalg.hpp"
#include "wkl/torus.hpp"

namespace wkl {

struct Facet {
  Vec normal;       // u_i
  double offset;    // lambda_i
  AffineFunction affine() const { return {normal, offset}; }
};

struct PolytopeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Quadrature node set over P (or over its boundary).
struct QuadratureRule {
  std::vector<Vec> nodes;
  std::vector<double> weights;
  double total_weight() const {
    double s = 0;
    for (double w : weights) s += w;
    return s;
  }
};

struct Simplex {
  std::vector<Vec> verts;  // k+1 points
};

class Polytope {
 public:
  Polytope(int dim, std::vector<Facet> facets);

  int dim() const { return dim_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  // Facet indices active at vertex v (exactly dim_ of them for simple vertices).
  const std::vector<std::vector<int>>& vertex_facets() const { return vertex_facets_; }
  // Vertex indices lying on facet i.
  const std::vector<std::vector<int>>& facet_vertices() const { return facet_vertices_; }

  double ell(int facet, const Vec& x) const {
    return dot(x, facets_[facet].normal) + facets_[facet].offset;
  }
  bool contains(const Vec& x, double tol = 1e-12) const;
  double min_facet_value(const Vec& x) const;

  double volume() const { return volume_; }
  Vec barycenter() const { return barycenter_; }
  Vec center_of_box() const;      // center of the bounding box
  double diameter() const;

  const std::vector<Simplex>& triangulation() const { return tri_; }

  // Interior tensor Gauss-Legendre quadrature of the given 1-d order per
  // simplex axis (default 8). Exact for moderate-degree polynomials.
  QuadratureRule interior_quadrature(int order = 8) const;

  // Boundary quadrature with the lattice measure; nodes tagged by facet.
  QuadratureRule boundary_quadrature(int order = 8, std::vector<int>* facet_of_node = nullptr) const;

  // True if every facet normal is integral and the vertex cones are unimodular.
  bool is_delzant(double tol = 1e-9) const;
  bool vertex_is_delzant(int vertex, double tol = 1e-9) const;

  // Lattice distance from the chop at `vertex` to the nearest other vertex;
  // upper bound for feasible corner chops.
  double chop_feasibility_bound(int vertex) const;

  // Truncate the corner at `vertex` by a new facet at lattice distance eps.
  Polytope chop_corner(int vertex, double eps) const;

  Polytope translated(const Vec& a) const;

  bool same_combinatorics(const Polytope& other, double tol = 1e-9) const;

 private:
  void enumerate_vertices();
  void triangulate();

  int dim_;
  std::vector<Facet> facets_;
  std::vector<Vec> vertices_;
  std::vector<std::vector<int>> vertex_facets_;
  std::vector<std::vector<int>> facet_vertices_;
  std::vector<Simplex> tri_;
  double volume_ = 0;
  Vec barycenter_;
};

// Named constructors for the fixture zoo.
Polytope make_interval(double a, double b);
Polytope make_box(const Vec& lo, const Vec& hi);
Polytope make_simplex(int dim, double lambda);  // {x_i >= 0, lambda - sum x_i >= 0}

double polytope_volume(const Polytope& p);
Vec polytope_barycenter(const Polytope& p);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace wkl
