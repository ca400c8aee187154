#ifndef FCA_TESTS_ORACLES_HPP
#define FCA_TESTS_ORACLES_HPP

// Reference computations for tests. These deliberately avoid the library's
// cosine tables and fast paths: every value is recomputed from std::cos and
// plain loops over nested vectors.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "fca/tensor.hpp"

namespace oracle {

using Grid = std::vector<std::vector<double>>;

inline double cos_term(std::size_t k, std::size_t i, std::size_t n) {
  return std::cos(std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) *
                  (static_cast<double>(i) + 0.5));
}

inline Grid to_grid(const fca::Tensor& t) {
  Grid g(t.extent(0), std::vector<double>(t.extent(1)));
  for (std::size_t i = 0; i < t.extent(0); ++i)
    for (std::size_t j = 0; j < t.extent(1); ++j) g[i][j] = t(i, j);
  return g;
}

inline double basis_value(std::size_t h, std::size_t w, std::size_t u, std::size_t v, std::size_t i,
                          std::size_t j) {
  return cos_term(u, i, h) * cos_term(v, j, w);
}

/// f[u][v] = sum_ij x[i][j] cos(pi u (i+1/2)/H) cos(pi v (j+1/2)/W)
inline Grid dct2(const Grid& x) {
  const std::size_t h = x.size(), w = x[0].size();
  Grid f(h, std::vector<double>(w, 0.0));
  for (std::size_t u = 0; u < h; ++u)
    for (std::size_t v = 0; v < w; ++v)
      for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j) f[u][v] += x[i][j] * basis_value(h, w, u, v, i, j);
  return f;
}

/// Unnormalized inverse, evaluated literally.
inline Grid idct2_plain(const Grid& f) {
  const std::size_t h = f.size(), w = f[0].size();
  Grid x(h, std::vector<double>(w, 0.0));
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < w; ++j)
      for (std::size_t u = 0; u < h; ++u)
        for (std::size_t v = 0; v < w; ++v) x[i][j] += f[u][v] * basis_value(h, w, u, v, i, j);
  return x;
}

/// Per-channel single-component pooling of a C x H x W tensor.
inline std::vector<double> pool(const fca::Tensor& x, std::size_t u, std::size_t v) {
  const std::size_t c = x.extent(0), h = x.extent(1), w = x.extent(2);
  std::vector<double> out(c, 0.0);
  for (std::size_t k = 0; k < c; ++k)
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j) out[k] += x(k, i, j) * basis_value(h, w, u, v, i, j);
  return out;
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline fca::Tensor random_tensor(fca::Shape shape, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  fca::Tensor t(std::move(shape));
  for (auto& v : t.data()) v = d(rng);
  return t;
}

/// Central finite difference of f with respect to every entry of `param`.
inline fca::Tensor finite_difference(fca::Tensor& param, const std::function<double()>& f, double step = 1e-5) {
  fca::Tensor g(param.shape());
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double orig = param[i];
    param[i] = orig + step;
    const double fp = f();
    param[i] = orig - step;
    const double fm = f();
    param[i] = orig;
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

/// max_i |a_i - b_i| / max(|a_i|, |b_i|, floor)
inline double max_relative_error(const fca::Tensor& a, const fca::Tensor& b, double floor = 1e-6) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max({std::abs(a[i]), std::abs(b[i]), floor});
    worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
  }
  return worst;
}

} // namespace oracle

#endif
