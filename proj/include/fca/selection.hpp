#ifndef FCA_SELECTION_HPP
#define FCA_SELECTION_HPP

// Frequency-component selection: low-frequency ordering (LF), top-k from
// measured per-component scores (TS), and the softmax relaxation used for
// architecture search over components (NAS).

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "fca/dct.hpp"
#include "fca/frequency.hpp"

namespace fca {

struct FrequencyGrid {
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t size() const noexcept { return height * width; }
  bool contains(Component c) const noexcept { return c.u < height && c.v < width; }
  std::vector<Component> components() const { return all_components(height, width); }
};

struct ComponentScore {
  Component component;
  Real score = 0;
};

/// Zigzag-style key: (u+v, u, v).
inline bool lf_less(Component a, Component b) {
  const auto sa = a.u + a.v, sb = b.u + b.v;
  if (sa != sb) return sa < sb;
  if (a.u != b.u) return a.u < b.u;
  return a.v < b.v;
}

/// All components of the grid, lowest frequency first. (0,0) always leads.
inline std::vector<Component> lf_order(const FrequencyGrid& grid) {
  auto out = grid.components();
  std::sort(out.begin(), out.end(), lf_less);
  return out;
}

inline FrequencyAssignment assign_lf(std::size_t channels, std::size_t k, const FrequencyGrid& grid) {
  if (k == 0 || k > grid.size()) {
    throw std::invalid_argument("assign_lf: k=" + std::to_string(k) + " outside [1, " +
                                std::to_string(grid.size()) + "]");
  }
  auto order = lf_order(grid);
  order.resize(k);
  return make_assignment(channels, grid.height, grid.width, std::move(order));
}

/// Top-k components by descending score; equal scores resolve toward lower frequency.
inline FrequencyAssignment assign_ts(std::size_t channels, std::size_t k, std::vector<ComponentScore> scores,
                                     const FrequencyGrid& grid) {
  std::set<Component> seen;
  for (const auto& s : scores) {
    if (!grid.contains(s.component))
      throw std::out_of_range("assign_ts: component " + to_string(s.component) + " outside grid");
    if (!std::isfinite(s.score))
      throw std::invalid_argument("assign_ts: non-finite score for " + to_string(s.component));
    if (!seen.insert(s.component).second)
      throw std::invalid_argument("assign_ts: duplicate component " + to_string(s.component));
  }
  if (k == 0 || k > scores.size()) {
    throw std::invalid_argument("assign_ts: k=" + std::to_string(k) + " but only " +
                                std::to_string(scores.size()) + " scored components");
  }
  std::sort(scores.begin(), scores.end(), [](const ComponentScore& a, const ComponentScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return lf_less(a.component, b.component);
  });
  std::vector<Component> chosen;
  chosen.reserve(k);
  for (std::size_t i = 0; i < k; ++i) chosen.push_back(scores[i].component);
  return make_assignment(channels, grid.height, grid.width, std::move(chosen));
}

/**
 * Architecture variables for component search.
 *
 * alpha is [n x GH x GW]: one logit per grid component for each of the n
 * channel parts. The grid may be smaller than the feature map it is applied to.
 */
struct NasState {
  Tensor alpha;
  Real temperature = 1;

  std::size_t parts() const { return alpha.extent(0); }
  FrequencyGrid grid() const { return {alpha.extent(1), alpha.extent(2)}; }
};

inline NasState make_nas_state(std::size_t parts, const FrequencyGrid& grid, Real temperature = 1) {
  if (parts == 0 || grid.size() == 0) throw std::invalid_argument("nas state: empty");
  if (!(temperature > 0)) throw std::invalid_argument("nas state: temperature must be positive");
  return {Tensor({parts, grid.height, grid.width}, Real{0}), temperature};
}

/// softmax(alpha / temperature) over all entries of one part's logits.
inline Tensor nas_weights(std::span<const Real> alpha, const Shape& grid_shape, Real temperature = 1) {
  Real mx = -std::numeric_limits<Real>::infinity();
  for (Real a : alpha) mx = std::max(mx, a / temperature);
  Tensor w(grid_shape);
  Real z{0};
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    w[k] = std::exp(alpha[k] / temperature - mx);
    z += w[k];
  }
  for (auto& x : w.data()) x /= z;
  return w;
}

inline Tensor nas_weights(const Tensor& alpha_part, Real temperature = 1) {
  require_rank(alpha_part, 2, "nas_weights");
  return nas_weights(alpha_part.data(), alpha_part.shape(), temperature);
}

/// Softmax-weighted combination of the grid's bases, evaluated on an H x W map.
inline Tensor nas_kernel(const Tensor& weights, std::size_t h, std::size_t w) {
  const std::size_t gh = weights.extent(0), gw = weights.extent(1);
  if (gh > h || gw > w) {
    throw ShapeError("nas: search grid " + std::to_string(gh) + "x" + std::to_string(gw) +
                     " exceeds map " + std::to_string(h) + "x" + std::to_string(w));
  }
  // sum_{u,v} w[u,v] cos_u(i) cos_v(j) = (C_h^T W C_w)[i,j] restricted to the grid rows.
  Tensor ch({gh, h}), cw({gw, w});
  for (std::size_t u = 0; u < gh; ++u)
    for (std::size_t i = 0; i < h; ++i) ch(u, i) = dct_cos(u, i, h);
  for (std::size_t v = 0; v < gw; ++v)
    for (std::size_t j = 0; j < w; ++j) cw(v, j) = dct_cos(v, j, w);
  return detail::sandwich(detail::transpose(ch), weights, cw);
}

/// Relaxed compression of one channel part: sum over grid components of softmax weight * spectral_pool.
inline Tensor nas_mix(const Tensor& xpart, const Tensor& alpha_part, Real temperature = 1) {
  require_rank(xpart, 3, "nas_mix");
  require_rank(alpha_part, 2, "nas_mix");
  const Tensor kernel = nas_kernel(nas_weights(alpha_part, temperature), xpart.extent(1), xpart.extent(2));
  Tensor out({xpart.extent(0)});
  const auto kv = kernel.data();
  for (std::size_t c = 0; c < xpart.extent(0); ++c) {
    const auto p = xpart.plane(c);
    Real acc{0};
    for (std::size_t i = 0; i < p.size(); ++i) acc += p[i] * kv[i];
    out[c] = acc;
  }
  return out;
}

/// Per-part argmax of alpha; ties go to the component earliest in lf_order.
inline std::vector<Component> nas_argmax(const NasState& state) {
  const auto grid = state.grid();
  const auto order = lf_order(grid);
  std::vector<Component> out;
  for (std::size_t p = 0; p < state.parts(); ++p) {
    Component best = order.front();
    Real best_val = state.alpha(p, best.u, best.v);
    for (auto c : order) {
      const Real a = state.alpha(p, c.u, c.v);
      if (a > best_val) {
        best = c;
        best_val = a;
      }
    }
    out.push_back(best);
  }
  return out;
}

inline FrequencyAssignment nas_derive(const NasState& state, std::size_t channels) {
  const auto grid = state.grid();
  return make_assignment(channels, grid.height, grid.width, nas_argmax(state));
}

} // namespace fca

#endif
