#include "wkl/smooth_fn.hpp"

#include <algorithm>

namespace wkl {

void LogSumExpFn::eval(const Vec& x, Jet4& jet) const {
  const int k = dim();
  jet = Jet4(k);

  const size_t m = pieces_.size();
  std::vector<double> z(m);
  double zmax = -1e300;
  for (size_t i = 0; i < m; ++i) {
    z[i] = alpha_ * pieces_[i](x);
    zmax = std::max(zmax, z[i]);
  }
  double sum = 0;
  std::vector<double> p(m);
  for (size_t i = 0; i < m; ++i) {
    p[i] = std::exp(z[i] - zmax);
    sum += p[i];
  }
  for (size_t i = 0; i < m; ++i) p[i] /= sum;

  jet.value = amp_ * (zmax + std::log(sum)) / alpha_;

  // Softmax mean slope and central moments C2..C4 of the slope distribution.
  Vec mu(k);
  for (size_t i = 0; i < m; ++i) mu += p[i] * pieces_[i].xi;
  jet.grad = amp_ * mu;

  Mat c2(k);
  Ten3 c3(k);
  Ten4 c4(k);
  for (size_t i = 0; i < m; ++i) {
    const Vec d = pieces_[i].xi - mu;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        c2(a, b) += p[i] * d[a] * d[b];
        for (int c = 0; c < k; ++c) {
          c3(a, b, c) += p[i] * d[a] * d[b] * d[c];
          for (int e = 0; e < k; ++e) c4(a, b, c, e) += p[i] * d[a] * d[b] * d[c] * d[e];
        }
      }
  }
  jet.hess = (amp_ * alpha_) * c2;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c) {
        jet.d3(a, b, c) = amp_ * alpha_ * alpha_ * c3(a, b, c);
        for (int e = 0; e < k; ++e) {
          // Fourth cumulant: C4 - C2(x)C2 over the three pairings.
          const double pairings = c2(a, b) * c2(c, e) + c2(a, c) * c2(b, e) + c2(a, e) * c2(b, c);
          jet.d4(a, b, c, e) =
              amp_ * alpha_ * alpha_ * alpha_ * (c4(a, b, c, e) - pairings);
        }
      }
}

}  // namespace wkl
