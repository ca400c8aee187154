#ifndef FCA_DCT_HPP
#define FCA_DCT_HPP

#include <cmath>
#include <compare>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <set>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "fca/tensor.hpp"

namespace fca {

/// A 2D DCT frequency index: u along height, v along width.
struct Component {
  std::size_t u = 0;
  std::size_t v = 0;
  auto operator<=>(const Component&) const = default;
};

inline std::string to_string(Component c) {
  return "(" + std::to_string(c.u) + "," + std::to_string(c.v) + ")";
}

inline void require_component_in_range(std::size_t h, std::size_t w, Component c, const char* what) {
  if (h == 0 || w == 0) throw std::invalid_argument(std::string(what) + ": empty spatial extent");
  if (c.u >= h || c.v >= w) {
    throw std::out_of_range(std::string(what) + ": component " + to_string(c) +
                            " outside " + std::to_string(h) + "x" + std::to_string(w) + " grid");
  }
}

/// cos(pi * k * (i + 1/2) / n)
inline Real dct_cos(std::size_t k, std::size_t i, std::size_t n) {
  if (k == 0) return Real{1};
  return static_cast<Real>(std::cos(std::numbers::pi * static_cast<double>(k) *
                                    (static_cast<double>(i) + 0.5) / static_cast<double>(n)));
}

/// n x n matrix M[k, i] = cos(pi * k * (i + 1/2) / n). Row 0 is exactly ones.
inline Tensor cosine_matrix(std::size_t n) {
  Tensor m({n, n});
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) m(k, i) = dct_cos(k, i, n);
  return m;
}

struct DctBasis {
  std::size_t u = 0;
  std::size_t v = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  Tensor values; // [H x W]
};

/// Unnormalized 2D DCT basis: values[i, j] = cos(pi u (i+1/2) / H) * cos(pi v (j+1/2) / W).
inline DctBasis basis(std::size_t h, std::size_t w, std::size_t u, std::size_t v) {
  require_component_in_range(h, w, {u, v}, "basis");
  DctBasis b{u, v, h, w, Tensor({h, w})};
  for (std::size_t i = 0; i < h; ++i) {
    const Real ci = dct_cos(u, i, h);
    for (std::size_t j = 0; j < w; ++j) b.values(i, j) = ci * dct_cos(v, j, w);
  }
  return b;
}

/// Basis scaled to unit Frobenius norm (the orthonormal DCT-II basis).
inline Tensor orthonormal_basis(std::size_t h, std::size_t w, std::size_t u, std::size_t v) {
  Tensor t = basis(h, w, u, v).values;
  const Real su = std::sqrt((u == 0 ? Real{1} : Real{2}) / static_cast<Real>(h));
  const Real sv = std::sqrt((v == 0 ? Real{1} : Real{2}) / static_cast<Real>(w));
  for (auto& x : t.data()) x *= su * sv;
  return t;
}

enum class DctPath { Separable, Naive };
enum class Normalization { PaperUnnormalized, Orthonormal };

namespace detail {

// out = a * b for row-major (m x k) * (k x n)
inline void matmul(const Real* a, const Real* b, Real* out, std::size_t m, std::size_t k,
                   std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    Real* row = out + i * n;
    for (std::size_t j = 0; j < n; ++j) row[j] = Real{0};
    for (std::size_t p = 0; p < k; ++p) {
      const Real s = a[i * k + p];
      const Real* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) row[j] += s * brow[j];
    }
  }
}

inline Tensor transpose(const Tensor& m) {
  Tensor t({m.extent(1), m.extent(0)});
  for (std::size_t i = 0; i < m.extent(0); ++i)
    for (std::size_t j = 0; j < m.extent(1); ++j) t(j, i) = m(i, j);
  return t;
}

// left (a x m) * x (m x n) * right (n x b)
inline Tensor sandwich(const Tensor& left, const Tensor& x, const Tensor& right) {
  Tensor tmp({left.extent(0), x.extent(1)});
  detail::matmul(left.data().data(), x.data().data(), tmp.data().data(), left.extent(0),
                 x.extent(0), x.extent(1));
  Tensor out({left.extent(0), right.extent(1)});
  detail::matmul(tmp.data().data(), right.data().data(), out.data().data(), tmp.extent(0),
                 tmp.extent(1), right.extent(1));
  return out;
}

inline Real inverse_weight(std::size_t k, std::size_t n) {
  return (k == 0 ? Real{1} : Real{2}) / static_cast<Real>(n);
}

} // namespace detail

/// Naive O(H^2 W^2) evaluation of f[h,w] = sum_ij x[i,j] B_{h,w}^{i,j}. Kept as the reference path.
inline Tensor dct2_naive(const Tensor& x) {
  require_rank(x, 2, "dct2");
  const std::size_t hh = x.extent(0), ww = x.extent(1);
  Tensor f({hh, ww});
  for (std::size_t h = 0; h < hh; ++h)
    for (std::size_t w = 0; w < ww; ++w) {
      Real acc{0};
      for (std::size_t i = 0; i < hh; ++i)
        for (std::size_t j = 0; j < ww; ++j) acc += x(i, j) * dct_cos(h, i, hh) * dct_cos(w, j, ww);
      f(h, w) = acc;
    }
  return f;
}

/// Forward unnormalized 2D DCT. The separable path computes C_H * x * C_W^T.
inline Tensor dct2(const Tensor& x, DctPath path = DctPath::Separable) {
  require_rank(x, 2, "dct2");
  if (path == DctPath::Naive) return dct2_naive(x);
  const Tensor ch = cosine_matrix(x.extent(0));
  const Tensor cw_t = detail::transpose(cosine_matrix(x.extent(1)));
  return detail::sandwich(ch, x, cw_t);
}

inline Tensor idct2_naive(const Tensor& f, Normalization norm) {
  require_rank(f, 2, "idct2");
  const std::size_t hh = f.extent(0), ww = f.extent(1);
  Tensor x({hh, ww});
  for (std::size_t i = 0; i < hh; ++i)
    for (std::size_t j = 0; j < ww; ++j) {
      Real acc{0};
      for (std::size_t h = 0; h < hh; ++h)
        for (std::size_t w = 0; w < ww; ++w) {
          Real s = f(h, w) * dct_cos(h, i, hh) * dct_cos(w, j, ww);
          if (norm == Normalization::Orthonormal)
            s *= detail::inverse_weight(h, hh) * detail::inverse_weight(w, ww);
          acc += s;
        }
      x(i, j) = acc;
    }
  return x;
}

/**
 * Inverse 2D DCT.
 *
 * PaperUnnormalized sums f[h,w] * B_{h,w}^{i,j} with no constants, which is not
 * the inverse of dct2. Orthonormal weights each coefficient by (1 or 2)/H times
 * (1 or 2)/W so that idct2(dct2(x), Orthonormal) == x.
 */
inline Tensor idct2(const Tensor& f, Normalization norm, DctPath path = DctPath::Separable) {
  require_rank(f, 2, "idct2");
  if (path == DctPath::Naive) return idct2_naive(f, norm);
  const std::size_t hh = f.extent(0), ww = f.extent(1);
  Tensor ch_t = detail::transpose(cosine_matrix(hh));
  Tensor cw = cosine_matrix(ww);
  if (norm == Normalization::Orthonormal) {
    for (std::size_t i = 0; i < hh; ++i)
      for (std::size_t h = 0; h < hh; ++h) ch_t(i, h) *= detail::inverse_weight(h, hh);
    for (std::size_t w = 0; w < ww; ++w)
      for (std::size_t j = 0; j < ww; ++j) cw(w, j) *= detail::inverse_weight(w, ww);
  }
  return detail::sandwich(ch_t, f, cw);
}

/// out[c] = sum_{h,w} X[c,h,w] * B_{h,w}^{u,v}: the single-component DCT of every channel.
inline Tensor spectral_pool(const Tensor& x, std::size_t u, std::size_t v) {
  require_rank(x, 3, "spectral_pool");
  const std::size_t c = x.extent(0), h = x.extent(1), w = x.extent(2);
  require_component_in_range(h, w, {u, v}, "spectral_pool");
  const Tensor b = basis(h, w, u, v).values;
  const auto bv = b.data();
  Tensor out({c});
  for (std::size_t k = 0; k < c; ++k) {
    const auto p = x.plane(k);
    Real acc{0};
    for (std::size_t i = 0; i < p.size(); ++i) acc += p[i] * bv[i];
    out[k] = acc;
  }
  return out;
}

/// Precomputed stack of DCT bases for a fixed spatial size.
struct FilterBank {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<Component> components;
  Tensor stacked; // [n x H x W]

  std::size_t size() const noexcept { return components.size(); }
  std::span<const Real> filter(std::size_t k) const { return stacked.plane(k); }
};

inline FilterBank make_filter_bank(std::size_t h, std::size_t w, const std::vector<Component>& components) {
  if (components.empty()) throw std::invalid_argument("make_filter_bank: no components");
  std::set<Component> seen;
  for (auto c : components) {
    require_component_in_range(h, w, c, "make_filter_bank");
    if (!seen.insert(c).second)
      throw std::invalid_argument("make_filter_bank: duplicate component " + to_string(c));
  }
  FilterBank bank{h, w, components, Tensor({components.size(), h, w})};
  for (std::size_t k = 0; k < components.size(); ++k) {
    const Tensor b = basis(h, w, components[k].u, components[k].v).values;
    std::copy(b.data().begin(), b.data().end(), bank.stacked.plane(k).begin());
  }
  return bank;
}

/// Every component of an H x W grid in row-major (u, v) order.
inline std::vector<Component> all_components(std::size_t h, std::size_t w) {
  std::vector<Component> out;
  out.reserve(h * w);
  for (std::size_t u = 0; u < h; ++u)
    for (std::size_t v = 0; v < w; ++v) out.push_back({u, v});
  return out;
}

/**
 * Process-wide cache of filter banks keyed by (H, W, components).
 * Entries are immutable once inserted; lookups take a shared lock.
 */
class FilterBankCache {
public:
  static FilterBankCache& instance() {
    static FilterBankCache cache;
    return cache;
  }

  std::shared_ptr<const FilterBank> get(std::size_t h, std::size_t w,
                                        const std::vector<Component>& components) {
    Key key{h, w, components};
    {
      std::shared_lock lock(mutex_);
      if (auto it = banks_.find(key); it != banks_.end()) return it->second;
    }
    auto bank = std::make_shared<const FilterBank>(make_filter_bank(h, w, components));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = banks_.emplace(std::move(key), std::move(bank));
    return it->second;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return banks_.size();
  }

private:
  using Key = std::tuple<std::size_t, std::size_t, std::vector<Component>>;
  mutable std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const FilterBank>> banks_;
};

inline std::shared_ptr<const FilterBank> cached_filter_bank(std::size_t h, std::size_t w,
                                                            const std::vector<Component>& components) {
  return FilterBankCache::instance().get(h, w, components);
}

} // namespace fca

#endif
