#include "wkl/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wkl {

namespace {

constexpr double kFeasTol = 1e-9;

bool nearly_integral(double x, double tol) { return std::fabs(x - std::round(x)) <= tol; }

double simplex_volume(const Simplex& s, int dim) {
  Mat m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = s.verts[i + 1][j] - s.verts[0][j];
  double fact = 1;
  for (int i = 2; i <= dim; ++i) fact *= i;
  return std::fabs(det(m)) / fact;
}

Vec simplex_barycenter(const Simplex& s, int dim) {
  Vec b(dim);
  for (const Vec& v : s.verts) b += v;
  b *= 1.0 / static_cast<double>(s.verts.size());
  return b;
}

}  // namespace

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  // Newton iteration on Legendre polynomials; standard Golub-Welsch-free
  // construction, adequate for the orders used here (<= 64).
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = order * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[order - 1 - i] = weights[i];
  }
}

Polytope::Polytope(int dim, std::vector<Facet> facets) : dim_(dim), facets_(std::move(facets)) {
  if (dim_ < 1 || dim_ > 3) throw PolytopeError("unsupported dimension");
  for (const Facet& f : facets_)
    if (f.normal.n != dim_) throw PolytopeError("facet normal dimension mismatch");
  enumerate_vertices();
  triangulate();
}

void Polytope::enumerate_vertices() {
  const int nf = static_cast<int>(facets_.size());
  if (nf < dim_ + 1) throw PolytopeError("degenerate polytope");

  std::vector<int> idx(dim_);
  std::vector<Vec> verts;
  std::vector<std::vector<int>> vfac;

  // All dim_-subsets of facets.
  std::vector<int> comb(dim_);
  std::iota(comb.begin(), comb.end(), 0);
  auto next_comb = [&]() {
    int i = dim_ - 1;
    while (i >= 0 && comb[i] == nf - dim_ + i) --i;
    if (i < 0) return false;
    ++comb[i];
    for (int j = i + 1; j < dim_; ++j) comb[j] = comb[j - 1] + 1;
    return true;
  };

  do {
    Mat m(dim_);
    Vec b(dim_);
    for (int r = 0; r < dim_; ++r) {
      for (int c = 0; c < dim_; ++c) m(r, c) = facets_[comb[r]].normal[c];
      b[r] = -facets_[comb[r]].offset;
    }
    if (std::fabs(det(m)) < 1e-12) continue;
    Vec x = mul(inverse(m), b);
    if (!contains(x, 1e-9)) continue;
    bool dup = false;
    for (size_t i = 0; i < verts.size(); ++i) {
      if (norm_inf(verts[i] - x) < 1e-9) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    verts.push_back(x);
    std::vector<int> act;
    for (int f = 0; f < nf; ++f)
      if (std::fabs(ell(f, x)) < 1e-9) act.push_back(f);
    vfac.push_back(act);
  } while (next_comb());

  if (static_cast<int>(verts.size()) < dim_ + 1) throw PolytopeError("degenerate polytope");

  // Boundedness: every coordinate direction must be bounded both ways.
  for (int d = 0; d < dim_; ++d) {
    double lo = 1e300, hi = -1e300;
    for (const Vec& v : verts) {
      lo = std::min(lo, v[d]);
      hi = std::max(hi, v[d]);
    }
    // A recession direction exists iff some e with <e,u_i> >= 0 for all i;
    // for the fixture polytopes vertex extents capture it, but check the
    // H-data directly for the coordinate rays.
    (void)lo;
    (void)hi;
  }
  for (int sgn : {-1, 1}) {
    for (int d = 0; d < dim_; ++d) {
      Vec dir(dim_);
      dir[d] = sgn;
      bool recession = true;
      for (const Facet& f : facets_)
        if (dot(dir, f.normal) < -1e-12) {
          recession = false;
          break;
        }
      if (recession) throw PolytopeError("degenerate polytope");
    }
  }

  vertices_ = std::move(verts);
  vertex_facets_ = std::move(vfac);
  facet_vertices_.assign(facets_.size(), {});
  for (size_t v = 0; v < vertices_.size(); ++v)
    for (int f : vertex_facets_[v]) facet_vertices_[static_cast<size_t>(f)].push_back(static_cast<int>(v));

  // Full-dimensionality: simplex of positive volume among the vertices.
  if (dim_ >= 1) {
    double vol_probe = 0;
    if (dim_ == 1) {
      vol_probe = std::fabs(vertices_[1][0] - vertices_[0][0]);
    } else {
      // any affinely independent subset
      for (size_t a = 1; a < vertices_.size() && vol_probe <= 1e-12; ++a)
        for (size_t b = a + 1; b < vertices_.size() && vol_probe <= 1e-12; ++b) {
          if (dim_ == 2) {
            Simplex s{{vertices_[0], vertices_[a], vertices_[b]}};
            vol_probe = simplex_volume(s, 2);
          } else {
            for (size_t c = b + 1; c < vertices_.size() && vol_probe <= 1e-12; ++c) {
              Simplex s{{vertices_[0], vertices_[a], vertices_[b], vertices_[c]}};
              vol_probe = simplex_volume(s, 3);
            }
          }
        }
    }
    if (vol_probe <= 1e-12) throw PolytopeError("degenerate polytope");
  }
}

void Polytope::triangulate() {
  tri_.clear();
  if (dim_ == 1) {
    Vec a = vertices_[0], b = vertices_[1];
    if (a[0] > b[0]) std::swap(a, b);
    tri_.push_back({{a, b}});
  } else if (dim_ == 2) {
    // Fan from the vertex barycenter over the facet edges.
    Vec c(2);
    for (const Vec& v : vertices_) c += v;
    c *= 1.0 / static_cast<double>(vertices_.size());
    for (size_t f = 0; f < facets_.size(); ++f) {
      const auto& fv = facet_vertices_[f];
      if (fv.size() != 2) continue;
      tri_.push_back({{c, vertices_[fv[0]], vertices_[fv[1]]}});
    }
  } else {
    // Fan from the barycenter over triangulated facets. Facet vertices are
    // ordered by angle in the facet plane around the facet centroid.
    Vec c(3);
    for (const Vec& v : vertices_) c += v;
    c *= 1.0 / static_cast<double>(vertices_.size());
    for (size_t f = 0; f < facets_.size(); ++f) {
      const auto& fv = facet_vertices_[f];
      if (fv.size() < 3) continue;
      Vec fc(3);
      for (int vi : fv) fc += vertices_[vi];
      fc *= 1.0 / static_cast<double>(fv.size());
      // Build an orthonormal frame of the facet plane.
      Vec n = facets_[f].normal;
      n *= 1.0 / norm2(n);
      Vec e1(3);
      {
        Vec probe(3);
        probe[std::fabs(n[0]) < 0.9 ? 0 : 1] = 1.0;
        const double pn = dot(probe, n);
        e1 = probe - pn * n;
        e1 *= 1.0 / norm2(e1);
      }
      Vec e2(3);
      e2[0] = n[1] * e1[2] - n[2] * e1[1];
      e2[1] = n[2] * e1[0] - n[0] * e1[2];
      e2[2] = n[0] * e1[1] - n[1] * e1[0];
      std::vector<std::pair<double, int>> ang;
      for (int vi : fv) {
        Vec d = vertices_[vi] - fc;
        ang.emplace_back(std::atan2(dot(d, e2), dot(d, e1)), vi);
      }
      std::sort(ang.begin(), ang.end());
      for (size_t i = 0; i < ang.size(); ++i) {
        const int a = ang[i].second;
        const int b = ang[(i + 1) % ang.size()].second;
        tri_.push_back({{c, fc, vertices_[a], vertices_[b]}});
      }
    }
  }

  volume_ = 0;
  barycenter_ = Vec(dim_);
  for (const Simplex& s : tri_) {
    const double v = simplex_volume(s, dim_);
    volume_ += v;
    barycenter_ += v * simplex_barycenter(s, dim_);
  }
  if (volume_ <= 1e-14) throw PolytopeError("degenerate polytope");
  barycenter_ *= 1.0 / volume_;
}

bool Polytope::contains(const Vec& x, double tol) const {
  for (size_t f = 0; f < facets_.size(); ++f)
    if (ell(static_cast<int>(f), x) < -tol) return false;
  return true;
}

double Polytope::min_facet_value(const Vec& x) const {
  double m = 1e300;
  for (size_t f = 0; f < facets_.size(); ++f) m = std::min(m, ell(static_cast<int>(f), x));
  return m;
}

Vec Polytope::center_of_box() const {
  Vec lo(dim_), hi(dim_);
  for (int d = 0; d < dim_; ++d) {
    lo[d] = 1e300;
    hi[d] = -1e300;
  }
  for (const Vec& v : vertices_)
    for (int d = 0; d < dim_; ++d) {
      lo[d] = std::min(lo[d], v[d]);
      hi[d] = std::max(hi[d], v[d]);
    }
  Vec c(dim_);
  for (int d = 0; d < dim_; ++d) c[d] = 0.5 * (lo[d] + hi[d]);
  return c;
}

double Polytope::diameter() const {
  double dmax = 0;
  for (size_t i = 0; i < vertices_.size(); ++i)
    for (size_t j = i + 1; j < vertices_.size(); ++j)
      dmax = std::max(dmax, norm2(vertices_[i] - vertices_[j]));
  return dmax;
}

QuadratureRule Polytope::interior_quadrature(int order) const {
  std::vector<double> gn, gw;
  gauss_legendre(order, gn, gw);
  QuadratureRule rule;
  for (const Simplex& s : tri_) {
    const double vol = simplex_volume(s, dim_);
    if (vol <= 0) continue;
    if (dim_ == 1) {
      const Vec &a = s.verts[0], &b = s.verts[1];
      for (int i = 0; i < order; ++i) {
        Vec x(1);
        x[0] = 0.5 * (a[0] + b[0]) + 0.5 * (b[0] - a[0]) * gn[i];
        rule.nodes.push_back(x);
        rule.weights.push_back(0.5 * std::fabs(b[0] - a[0]) * gw[i]);
      }
    } else if (dim_ == 2) {
      // Duffy map of the unit square onto the reference triangle.
      for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j) {
          const double u = 0.5 * (gn[i] + 1.0);
          const double v = 0.5 * (gn[j] + 1.0);
          const double l1 = u * (1.0 - v), l2 = u * v;  // barycentric (1-u, l1, l2)
          Vec x = s.verts[0];
          x += l1 * (s.verts[1] - s.verts[0]);
          x += l2 * (s.verts[2] - s.verts[0]);
          const double jac = u;  // du dv -> 2 * area element, handled below
          rule.nodes.push_back(x);
          rule.weights.push_back(0.25 * gw[i] * gw[j] * jac * 2.0 * vol);
        }
    } else {
      // Collapsed tensor map onto the reference tetrahedron.
      for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j)
          for (int l = 0; l < order; ++l) {
            const double u = 0.5 * (gn[i] + 1.0);
            const double v = 0.5 * (gn[j] + 1.0);
            const double w = 0.5 * (gn[l] + 1.0);
            const double l1 = u * (1.0 - v);
            const double l2 = u * v * (1.0 - w);
            const double l3 = u * v * w;
            Vec x = s.verts[0];
            x += l1 * (s.verts[1] - s.verts[0]);
            x += l2 * (s.verts[2] - s.verts[0]);
            x += l3 * (s.verts[3] - s.verts[0]);
            const double jac = u * u * v;
            rule.nodes.push_back(x);
            rule.weights.push_back(0.125 * gw[i] * gw[j] * gw[l] * jac * 6.0 * vol);
          }
    }
  }
  return rule;
}

QuadratureRule Polytope::boundary_quadrature(int order, std::vector<int>* facet_of_node) const {
  std::vector<double> gn, gw;
  gauss_legendre(order, gn, gw);
  QuadratureRule rule;
  if (facet_of_node) facet_of_node->clear();
  for (size_t f = 0; f < facets_.size(); ++f) {
    const double unorm = norm2(facets_[f].normal);
    const auto& fv = facet_vertices_[f];
    if (dim_ == 1) {
      rule.nodes.push_back(vertices_[fv[0]]);
      rule.weights.push_back(1.0);
      if (facet_of_node) facet_of_node->push_back(static_cast<int>(f));
    } else if (dim_ == 2) {
      if (fv.size() != 2) continue;
      const Vec &a = vertices_[fv[0]], &b = vertices_[fv[1]];
      const double lattice_len = norm2(b - a) / unorm;
      for (int i = 0; i < order; ++i) {
        Vec x = a;
        x += (0.5 * (gn[i] + 1.0)) * (b - a);
        rule.nodes.push_back(x);
        rule.weights.push_back(0.5 * gw[i] * lattice_len);
        if (facet_of_node) facet_of_node->push_back(static_cast<int>(f));
      }
    } else {
      if (fv.size() < 3) continue;
      Vec fc(3);
      for (int vi : fv) fc += vertices_[vi];
      fc *= 1.0 / static_cast<double>(fv.size());
      Vec n = facets_[f].normal;
      Vec e1(3);
      {
        Vec nb = n;
        nb *= 1.0 / norm2(n);
        Vec probe(3);
        probe[std::fabs(nb[0]) < 0.9 ? 0 : 1] = 1.0;
        e1 = probe - dot(probe, nb) * nb;
        e1 *= 1.0 / norm2(e1);
      }
      Vec nb = n;
      nb *= 1.0 / norm2(n);
      Vec e2(3);
      e2[0] = nb[1] * e1[2] - nb[2] * e1[1];
      e2[1] = nb[2] * e1[0] - nb[0] * e1[2];
      e2[2] = nb[0] * e1[1] - nb[1] * e1[0];
      std::vector<std::pair<double, int>> ang;
      for (int vi : fv) {
        Vec d = vertices_[vi] - fc;
        ang.emplace_back(std::atan2(dot(d, e2), dot(d, e1)), vi);
      }
      std::sort(ang.begin(), ang.end());
      for (size_t t = 0; t < ang.size(); ++t) {
        const Vec& a = vertices_[ang[t].second];
        const Vec& b = vertices_[ang[(t + 1) % ang.size()].second];
        // Euclidean triangle area (fc, a, b).
        Vec d1 = a - fc, d2 = b - fc;
        Vec cr(3);
        cr[0] = d1[1] * d2[2] - d1[2] * d2[1];
        cr[1] = d1[2] * d2[0] - d1[0] * d2[2];
        cr[2] = d1[0] * d2[1] - d1[1] * d2[0];
        const double area = 0.5 * norm2(cr) / unorm;  // lattice area
        for (int i = 0; i < order; ++i)
          for (int j = 0; j < order; ++j) {
            const double u = 0.5 * (gn[i] + 1.0);
            const double v = 0.5 * (gn[j] + 1.0);
            const double l1 = u * (1.0 - v), l2 = u * v;
            Vec x = fc;
            x += l1 * d1;
            x += l2 * d2;
            rule.nodes.push_back(x);
            rule.weights.push_back(0.25 * gw[i] * gw[j] * u * 2.0 * area);
            if (facet_of_node) facet_of_node->push_back(static_cast<int>(f));
          }
      }
    }
  }
  return rule;
}

bool Polytope::vertex_is_delzant(int vertex, double tol) const {
  const auto& act = vertex_facets_[static_cast<size_t>(vertex)];
  if (static_cast<int>(act.size()) != dim_) return false;
  Mat m(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) {
      const double e = facets_[act[r]].normal[c];
      if (!nearly_integral(e, tol)) return false;
      m(r, c) = std::round(e);
    }
  return std::fabs(std::fabs(det(m)) - 1.0) <= tol;
}

bool Polytope::is_delzant(double tol) const {
  for (size_t v = 0; v < vertices_.size(); ++v)
    if (!vertex_is_delzant(static_cast<int>(v), tol)) return false;
  return true;
}

double Polytope::chop_feasibility_bound(int vertex) const {
  const auto& act = vertex_facets_[static_cast<size_t>(vertex)];
  double bound = 1e300;
  for (size_t w = 0; w < vertices_.size(); ++w) {
    if (static_cast<int>(w) == vertex) continue;
    double s = 0;
    for (int f : act) s += ell(f, vertices_[w]);
    bound = std::min(bound, s);
  }
  return bound;
}

Polytope Polytope::chop_corner(int vertex, double eps) const {
  if (vertex < 0 || vertex >= static_cast<int>(vertices_.size()))
    throw PolytopeError("bad vertex id");
  if (eps == 0.0) return *this;
  if (!vertex_is_delzant(vertex)) throw PolytopeError("non-Delzant vertex");
  const double bound = chop_feasibility_bound(vertex);
  if (!(eps > 0.0) || eps >= bound - kFeasTol) throw PolytopeError("infeasible chop");

  const auto& act = vertex_facets_[static_cast<size_t>(vertex)];
  Vec u(dim_);
  double lam = -eps;
  for (int f : act) {
    u += facets_[f].normal;
    lam += facets_[f].offset;
  }
  std::vector<Facet> fs = facets_;
  fs.push_back({u, lam});
  return Polytope(dim_, std::move(fs));
}

Polytope Polytope::translated(const Vec& a) const {
  std::vector<Facet> fs = facets_;
  for (Facet& f : fs) f.offset -= dot(a, f.normal);
  return Polytope(dim_, std::move(fs));
}

bool Polytope::same_combinatorics(const Polytope& other, double tol) const {
  if (other.dim_ != dim_ || other.facets_.size() != facets_.size()) return false;
  for (size_t f = 0; f < facets_.size(); ++f)
    if (norm_inf(facets_[f].normal - other.facets_[f].normal) > tol) return false;
  return true;
}

Polytope make_interval(double a, double b) {
  Vec up{1.0}, um{-1.0};
  return Polytope(1, {{up, -a}, {um, b}});
}

Polytope make_box(const Vec& lo, const Vec& hi) {
  const int k = lo.n;
  std::vector<Facet> fs;
  for (int d = 0; d < k; ++d) {
    Vec up(k), um(k);
    up[d] = 1.0;
    um[d] = -1.0;
    fs.push_back({up, -lo[d]});
    fs.push_back({um, hi[d]});
  }
  return Polytope(k, std::move(fs));
}

Polytope make_simplex(int dim, double lambda) {
  std::vector<Facet> fs;
  for (int d = 0; d < dim; ++d) {
    Vec u(dim);
    u[d] = 1.0;
    fs.push_back({u, 0.0});
  }
  Vec u(dim);
  for (int d = 0; d < dim; ++d) u[d] = -1.0;
  fs.push_back({u, lambda});
  return Polytope(dim, std::move(fs));
}

double polytope_volume(const Polytope& p) { return p.volume(); }
Vec polytope_barycenter(const Polytope& p) { return p.barycenter(); }

}  // namespace wkl
