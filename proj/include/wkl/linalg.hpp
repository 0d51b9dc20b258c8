#pragma once

// Small dense linear algebra for torus ranks k <= 3 (plus rank+1 <= 4 for the
// Futaki-Mabuchi Gram system). Fixed-capacity, stack-allocated.

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>

namespace wkl {

inline constexpr int kMaxDim = 4;

struct Vec {
  int n = 0;
  std::array<double, kMaxDim> a{};

  Vec() = default;
  explicit Vec(int n_) : n(n_) { assert(n >= 0 && n <= kMaxDim); }
  Vec(std::initializer_list<double> xs) : n(static_cast<int>(xs.size())) {
    assert(n <= kMaxDim);
    std::copy(xs.begin(), xs.end(), a.begin());
  }
  static Vec zero(int n) { return Vec(n); }

  double& operator[](int i) { return a[static_cast<size_t>(i)]; }
  double operator[](int i) const { return a[static_cast<size_t>(i)]; }

  Vec& operator+=(const Vec& o) { for (int i = 0; i < n; ++i) a[i] += o.a[i]; return *this; }
  Vec& operator-=(const Vec& o) { for (int i = 0; i < n; ++i) a[i] -= o.a[i]; return *this; }
  Vec& operator*=(double t) { for (int i = 0; i < n; ++i) a[i] *= t; return *this; }

  friend Vec operator+(Vec x, const Vec& y) { return x += y; }
  friend Vec operator-(Vec x, const Vec& y) { return x -= y; }
  friend Vec operator*(double t, Vec x) { return x *= t; }
  friend Vec operator*(Vec x, double t) { return x *= t; }
};

inline double dot(const Vec& x, const Vec& y) {
  assert(x.n == y.n);
  double s = 0;
  for (int i = 0; i < x.n; ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

inline double norm_inf(const Vec& x) {
  double m = 0;
  for (int i = 0; i < x.n; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

// Row-major square matrix, capacity 4x4.
struct Mat {
  int n = 0;
  std::array<double, kMaxDim * kMaxDim> a{};

  Mat() = default;
  explicit Mat(int n_) : n(n_) { assert(n >= 0 && n <= kMaxDim); }
  static Mat zero(int n) { return Mat(n); }
  static Mat identity(int n) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(int i, int j) { return a[static_cast<size_t>(i * kMaxDim + j)]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i * kMaxDim + j)]; }

  Mat& operator+=(const Mat& o) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) (*this)(i, j) += o(i, j);
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) (*this)(i, j) -= o(i, j);
    return *this;
  }
  Mat& operator*=(double t) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) (*this)(i, j) *= t;
    return *this;
  }
  friend Mat operator+(Mat x, const Mat& y) { return x += y; }
  friend Mat operator-(Mat x, const Mat& y) { return x -= y; }
  friend Mat operator*(double t, Mat x) { return x *= t; }
};

inline Vec mul(const Mat& m, const Vec& x) {
  assert(m.n == x.n);
  Vec y(m.n);
  for (int i = 0; i < m.n; ++i) {
    double s = 0;
    for (int j = 0; j < m.n; ++j) s += m(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

inline Mat mul(const Mat& x, const Mat& y) {
  assert(x.n == y.n);
  Mat z(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) {
      double s = 0;
      for (int l = 0; l < x.n; ++l) s += x(i, l) * y(l, j);
      z(i, j) = s;
    }
  return z;
}

inline Mat outer(const Vec& x, const Vec& y) {
  assert(x.n == y.n);
  Mat m(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) m(i, j) = x[i] * y[j];
  return m;
}

inline double trace(const Mat& m) {
  double s = 0;
  for (int i = 0; i < m.n; ++i) s += m(i, i);
  return s;
}

inline double det(const Mat& m) {
  switch (m.n) {
    case 1: return m(0, 0);
    case 2: return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    default: {
      // n == 4 via cofactor expansion on the first row.
      double s = 0;
      for (int j = 0; j < m.n; ++j) {
        Mat sub(m.n - 1);
        for (int r = 1; r < m.n; ++r) {
          int cc = 0;
          for (int c = 0; c < m.n; ++c) {
            if (c == j) continue;
            sub(r - 1, cc++) = m(r, c);
          }
        }
        s += ((j % 2) ? -1.0 : 1.0) * m(0, j) * det(sub);
      }
      return s;
    }
  }
}

inline Mat inverse(const Mat& m) {
  Mat inv(m.n);
  const double d = det(m);
  if (d == 0.0) throw std::runtime_error("singular matrix");
  switch (m.n) {
    case 1:
      inv(0, 0) = 1.0 / d;
      return inv;
    case 2:
      inv(0, 0) = m(1, 1) / d;
      inv(1, 1) = m(0, 0) / d;
      inv(0, 1) = -m(0, 1) / d;
      inv(1, 0) = -m(1, 0) / d;
      return inv;
    case 3: {
      inv(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / d;
      inv(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / d;
      inv(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / d;
      inv(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / d;
      inv(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / d;
      inv(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / d;
      inv(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / d;
      inv(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / d;
      inv(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / d;
      return inv;
    }
    default: {
      // Gauss-Jordan for n == 4.
      Mat aug = m, id = Mat::identity(m.n);
      for (int col = 0; col < m.n; ++col) {
        int piv = col;
        for (int r = col + 1; r < m.n; ++r)
          if (std::fabs(aug(r, col)) > std::fabs(aug(piv, col))) piv = r;
        if (aug(piv, col) == 0.0) throw std::runtime_error("singular matrix");
        for (int c = 0; c < m.n; ++c) {
          std::swap(aug(col, c), aug(piv, c));
          std::swap(id(col, c), id(piv, c));
        }
        const double p = aug(col, col);
        for (int c = 0; c < m.n; ++c) {
          aug(col, c) /= p;
          id(col, c) /= p;
        }
        for (int r = 0; r < m.n; ++r) {
          if (r == col) continue;
          const double f = aug(r, col);
          for (int c = 0; c < m.n; ++c) {
            aug(r, c) -= f * aug(col, c);
            id(r, c) -= f * id(col, c);
          }
        }
      }
      return id;
    }
  }
}

// Solve m x = b for symmetric positive definite m (Cholesky, capacity 4).
inline Vec solve_spd(const Mat& m, const Vec& b) {
  const int n = m.n;
  Mat l(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = m(i, j);
      for (int p = 0; p < j; ++p) s -= l(i, p) * l(j, p);
      if (i == j) {
        if (s <= 0.0) throw std::runtime_error("matrix not positive definite");
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  Vec y(n);
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int p = 0; p < i; ++p) s -= l(i, p) * y[p];
    y[i] = s / l(i, i);
  }
  Vec x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (int p = i + 1; p < n; ++p) s -= l(p, i) * x[p];
    x[i] = s / l(i, i);
  }
  return x;
}

// log det of a symmetric positive definite matrix; throws on non-SPD input.
inline double logdet_spd(const Mat& m) {
  const int n = m.n;
  Mat l(n);
  double ld = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = m(i, j);
      for (int p = 0; p < j; ++p) s -= l(i, p) * l(j, p);
      if (i == j) {
        if (s <= 0.0) throw std::runtime_error("matrix not positive definite");
        l(i, i) = std::sqrt(s);
        ld += 2.0 * std::log(l(i, i));
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return ld;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations (ascending).
inline Vec sym_eigenvalues(Mat m) {
  const int n = m.n;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::fabs(m(p, q)) < 1e-300) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int i = 0; i < n; ++i) {
          const double mip = m(i, p), miq = m(i, q);
          m(i, p) = c * mip - s * miq;
          m(i, q) = s * mip + c * miq;
        }
        for (int i = 0; i < n; ++i) {
          const double mpi = m(p, i), mqi = m(q, i);
          m(p, i) = c * mpi - s * mqi;
          m(q, i) = s * mpi + c * mqi;
        }
      }
  }
  Vec ev(n);
  for (int i = 0; i < n; ++i) ev[i] = m(i, i);
  std::sort(ev.a.begin(), ev.a.begin() + n);
  return ev;
}

inline double min_eigenvalue(const Mat& m) { return sym_eigenvalues(m)[0]; }

// Dense symmetric 3- and 4-tensors, capacity 3 per axis (third and fourth
// s-derivatives of potentials; rank k <= 3).
struct Ten3 {
  int n = 0;
  std::array<double, 27> a{};
  explicit Ten3(int n_ = 0) : n(n_) { assert(n <= 3); }
  double& operator()(int i, int j, int l) { return a[static_cast<size_t>((i * 3 + j) * 3 + l)]; }
  double operator()(int i, int j, int l) const { return a[static_cast<size_t>((i * 3 + j) * 3 + l)]; }
};

struct Ten4 {
  int n = 0;
  std::array<double, 81> a{};
  explicit Ten4(int n_ = 0) : n(n_) { assert(n <= 3); }
  double& operator()(int i, int j, int l, int p) {
    return a[static_cast<size_t>(((i * 3 + j) * 3 + l) * 3 + p)];
  }
  double operator()(int i, int j, int l, int p) const {
    return a[static_cast<size_t>(((i * 3 + j) * 3 + l) * 3 + p)];
  }
};

// Contraction of a 3-tensor with a vector on its last slot.
inline Mat contract(const Ten3& t, const Vec& x) {
  Mat m(t.n);
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j) {
      double s = 0;
      for (int l = 0; l < t.n; ++l) s += t(i, j, l) * x[l];
      m(i, j) = s;
    }
  return m;
}

inline Ten3 contract(const Ten4& t, const Vec& x) {
  Ten3 r(t.n);
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j)
      for (int l = 0; l < t.n; ++l) {
        double s = 0;
        for (int p = 0; p < t.n; ++p) s += t(i, j, l, p) * x[p];
        r(i, j, l) = s;
      }
  return r;
}

}  // namespace wkl
