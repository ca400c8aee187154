#ifndef FCA_ATTENTION_HPP
#define FCA_ATTENTION_HPP

// Channel attention: compress -> fc (C -> C/r -> C) -> sigmoid -> channel scaling,
// with analytic gradients for every parameter and the input.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "fca/dct.hpp"
#include "fca/frequency.hpp"
#include "fca/selection.hpp"
#include "fca/tensor.hpp"

namespace fca {

enum class TensorInit { Random, Dct };

/// Per-part spatial weight maps used in place of DCT bases.
struct CompressionTensor {
  Tensor weights; // [n x H x W]
  bool trainable = false;
};

struct GapCompression {};

struct MultiSpectralCompression {
  FrequencyAssignment assignment;
};

struct LearnableCompression {
  FrequencyAssignment assignment; // fixes n, H, W and the DCT initialisation
  TensorInit init = TensorInit::Dct;
  CompressionTensor tensor;
};

struct NasCompression {
  NasState state;
};

using Compression = std::variant<GapCompression, MultiSpectralCompression, LearnableCompression, NasCompression>;

inline const char* compression_name(const Compression& c) {
  return std::visit(
      [](const auto& s) -> const char* {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, GapCompression>) return "gap";
        else if constexpr (std::is_same_v<S, MultiSpectralCompression>) return "multispectral";
        else if constexpr (std::is_same_v<S, LearnableCompression>) return "learnable";
        else return "nas";
      },
      c);
}

/**
 * Builds a learnable compression tensor. Dct init copies the assigned bases
 * exactly; Random init draws uniformly from [-1, 1].
 */
template <typename Rng>
LearnableCompression make_learnable(const FrequencyAssignment& assignment, TensorInit init, bool trainable,
                                    Rng& rng) {
  validate(assignment);
  const std::size_t n = assignment.parts(), h = assignment.height, w = assignment.width;
  LearnableCompression lc{assignment, init, {Tensor({n, h, w}), trainable}};
  if (init == TensorInit::Dct) {
    for (std::size_t p = 0; p < n; ++p) {
      const auto c = assignment.components[p];
      const Tensor b = basis(h, w, c.u, c.v).values;
      std::copy(b.data().begin(), b.data().end(), lc.tensor.weights.plane(p).begin());
    }
  } else {
    std::uniform_real_distribution<Real> dist(Real{-1}, Real{1});
    for (auto& x : lc.tensor.weights.data()) x = dist(rng);
  }
  return lc;
}

struct AttentionParams {
  std::size_t channels = 0;
  std::size_t reduction = 16;
  Tensor w1; // [C/r x C]
  Tensor b1; // [C/r]
  Tensor w2; // [C x C/r]
  Tensor b2; // [C]
  Compression compression = GapCompression{};
  /// Multiplies the compressed vector before the fc head (e.g. 1/HW to put DCT pooling on GAP's scale).
  Real input_scale = 1;

  std::size_t hidden() const noexcept { return channels / reduction; }
};

inline void validate_head(std::size_t channels, std::size_t reduction) {
  if (channels == 0) throw std::invalid_argument("attention: C must be positive");
  if (reduction == 0 || channels % reduction != 0) {
    throw std::invalid_argument("attention: reduction r=" + std::to_string(reduction) +
                                " must divide C=" + std::to_string(channels));
  }
}

struct HeadInit {
  Real w1_scale = 1; // multiplies the default U(-1/sqrt(fan_in), 1/sqrt(fan_in)) draw
  Real w2_scale = 1;
  Real b1 = 0;
  Real b2 = 0;
};

template <typename Rng>
AttentionParams make_attention_params(std::size_t channels, std::size_t reduction, Compression compression,
                                      Rng& rng, HeadInit init = {}) {
  validate_head(channels, reduction);
  const std::size_t hid = channels / reduction;
  AttentionParams p{channels,
                    reduction,
                    Tensor({hid, channels}),
                    Tensor({hid}, init.b1),
                    Tensor({channels, hid}),
                    Tensor({channels}, init.b2),
                    std::move(compression),
                    1};
  const Real a1 = init.w1_scale / std::sqrt(static_cast<Real>(channels));
  const Real a2 = init.w2_scale / std::sqrt(static_cast<Real>(hid));
  std::uniform_real_distribution<Real> unit(Real{-1}, Real{1});
  for (auto& x : p.w1.data()) x = a1 * unit(rng);
  for (auto& x : p.w2.data()) x = a2 * unit(rng);
  return p;
}

inline std::size_t fc_param_count(std::size_t channels, std::size_t reduction) {
  validate_head(channels, reduction);
  const std::size_t hid = channels / reduction;
  return channels * hid + hid + hid * channels + channels;
}

/// Trainable parameter count. DCT bases are constants and add nothing.
inline std::size_t param_count(std::size_t channels, std::size_t reduction, const Compression& compression) {
  const std::size_t base = fc_param_count(channels, reduction);
  return std::visit(
      [&](const auto& s) -> std::size_t {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, LearnableCompression>) {
          return base + (s.tensor.trainable ? s.tensor.weights.size() : 0);
        } else if constexpr (std::is_same_v<S, NasCompression>) {
          return base + s.state.alpha.size();
        } else {
          return base;
        }
      },
      compression);
}

namespace detail {

inline Real stable_sigmoid(Real z) {
  if (z >= 0) {
    const Real e = std::exp(-z);
    return Real{1} / (Real{1} + e);
  }
  const Real e = std::exp(z);
  return e / (Real{1} + e);
}

inline void fnv_mix(std::uint64_t& h, std::span<const Real> values) {
  for (Real v : values) {
    unsigned char bytes[sizeof(Real)];
    std::memcpy(bytes, &v, sizeof(Real));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ull;
    }
  }
}

// Parts and spatial kernel of a pooling strategy; nullopt means GAP.
struct PoolingPlan {
  std::size_t parts = 1;
  Tensor kernels; // [n x H x W]
};

inline void check_parts(std::size_t channels, std::size_t parts, const char* what) {
  if (parts == 0 || channels % parts != 0) {
    throw std::invalid_argument(std::string(what) + ": C=" + std::to_string(channels) +
                                " is not divisible by n=" + std::to_string(parts));
  }
}

inline void check_map(const FrequencyAssignment& a, std::size_t channels, std::size_t h, std::size_t w,
                      const char* what) {
  validate(a);
  if (a.channels != channels || a.height != h || a.width != w) {
    throw ShapeError(std::string(what) + ": assignment is for C=" + std::to_string(a.channels) + " " +
                     std::to_string(a.height) + "x" + std::to_string(a.width) + ", input is C=" +
                     std::to_string(channels) + " " + std::to_string(h) + "x" + std::to_string(w));
  }
}

inline std::optional<PoolingPlan> pooling_plan(const Compression& compression, std::size_t channels,
                                               std::size_t h, std::size_t w) {
  return std::visit(
      [&](const auto& s) -> std::optional<PoolingPlan> {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, GapCompression>) {
          return std::nullopt;
        } else if constexpr (std::is_same_v<S, MultiSpectralCompression>) {
          check_map(s.assignment, channels, h, w, "compress");
          const auto& comps = s.assignment.components;
          std::vector<Component> unique(comps.begin(), comps.end());
          std::sort(unique.begin(), unique.end());
          unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
          if (unique.size() == comps.size()) {
            return PoolingPlan{comps.size(), cached_filter_bank(h, w, comps)->stacked};
          }
          // repeated components (always the case for n > 1 on a 1x1 map)
          const auto bank = cached_filter_bank(h, w, unique);
          PoolingPlan plan{comps.size(), Tensor({comps.size(), h, w})};
          for (std::size_t p = 0; p < comps.size(); ++p) {
            const auto at = std::lower_bound(unique.begin(), unique.end(), comps[p]) - unique.begin();
            const auto src = bank->filter(static_cast<std::size_t>(at));
            std::copy(src.begin(), src.end(), plan.kernels.plane(p).begin());
          }
          return plan;
        } else if constexpr (std::is_same_v<S, LearnableCompression>) {
          const auto& t = s.tensor.weights;
          check_parts(channels, t.extent(0), "compress");
          if (t.rank() != 3 || t.extent(1) != h || t.extent(2) != w) {
            throw ShapeError("compress: compression tensor " + shape_str(t.shape()) + " vs map " +
                             std::to_string(h) + "x" + std::to_string(w));
          }
          return PoolingPlan{t.extent(0), t};
        } else {
          const auto& alpha = s.state.alpha;
          require_rank(alpha, 3, "compress");
          check_parts(channels, alpha.extent(0), "compress");
          PoolingPlan plan{alpha.extent(0), Tensor({alpha.extent(0), h, w})};
          for (std::size_t p = 0; p < plan.parts; ++p) {
            const Tensor wts = nas_weights(alpha.plane(p), {alpha.extent(1), alpha.extent(2)},
                                           s.state.temperature);
            const Tensor k = nas_kernel(wts, h, w);
            std::copy(k.data().begin(), k.data().end(), plan.kernels.plane(p).begin());
          }
          return plan;
        }
      },
      compression);
}

inline Tensor pool_with(const Tensor& x, const PoolingPlan& plan) {
  const std::size_t c = x.extent(0);
  const std::size_t per = c / plan.parts;
  Tensor out({c});
  for (std::size_t ch = 0; ch < c; ++ch) {
    const auto p = x.plane(ch);
    const auto k = plan.kernels.plane(ch / per);
    Real acc{0};
    for (std::size_t i = 0; i < p.size(); ++i) acc += p[i] * k[i];
    out[ch] = acc;
  }
  return out;
}

} // namespace detail

/// Fingerprint of everything the forward pass reads from params.
inline std::uint64_t params_fingerprint(const AttentionParams& p) {
  std::uint64_t h = 1469598103934665603ull;
  h ^= p.channels * 0x9e3779b97f4a7c15ull;
  h ^= p.reduction + (h << 6);
  detail::fnv_mix(h, p.w1.data());
  detail::fnv_mix(h, p.b1.data());
  detail::fnv_mix(h, p.w2.data());
  detail::fnv_mix(h, p.b2.data());
  const Real scale[] = {p.input_scale};
  detail::fnv_mix(h, scale);
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        h ^= p.compression.index() + 0x51ull;
        if constexpr (std::is_same_v<S, MultiSpectralCompression>) {
          for (auto c : s.assignment.components) h = (h ^ (c.u * 131 + c.v)) * 1099511628211ull;
        } else if constexpr (std::is_same_v<S, LearnableCompression>) {
          detail::fnv_mix(h, s.tensor.weights.data());
        } else if constexpr (std::is_same_v<S, NasCompression>) {
          detail::fnv_mix(h, s.state.alpha.data());
          const Real t[] = {s.state.temperature};
          detail::fnv_mix(h, t);
        }
      },
      p.compression);
  return h;
}

/// compress: R^{C x H x W} -> R^C for the configured strategy (unscaled).
inline Tensor compress(const Tensor& x, const AttentionParams& params) {
  require_rank(x, 3, "compress");
  if (x.extent(0) != params.channels) {
    throw ShapeError("compress: input has " + std::to_string(x.extent(0)) + " channels, params expect " +
                     std::to_string(params.channels));
  }
  const auto plan = detail::pooling_plan(params.compression, x.extent(0), x.extent(1), x.extent(2));
  if (!plan) return reduce_mean_hw(x);
  return detail::pool_with(x, *plan);
}

struct AttentionCache {
  const AttentionParams* params = nullptr;
  std::uint64_t fingerprint = 0;
  Tensor x;
  std::optional<detail::PoolingPlan> plan;
  Tensor compressed; // before input_scale
  Tensor pre;        // W1 z + b1
  Tensor hidden;     // relu(pre)
  Tensor att;
};

struct AttentionForward {
  Tensor att;
  AttentionCache cache;
};

/**
 * att = sigmoid(W2 relu(W1 (s * compress(X)) + b1) + b2), s = params.input_scale.
 * The cache keeps a pointer to params; params must outlive it and stay unchanged
 * until the matching backward call.
 */
inline AttentionForward attention_forward(const Tensor& x, const AttentionParams& params) {
  require_rank(x, 3, "attention_forward");
  validate_head(params.channels, params.reduction);
  if (x.extent(0) != params.channels) {
    throw ShapeError("attention_forward: input has " + std::to_string(x.extent(0)) +
                     " channels, params expect " + std::to_string(params.channels));
  }
  const std::size_t c = params.channels, hid = params.hidden();
  AttentionCache cache;
  cache.params = &params;
  cache.fingerprint = params_fingerprint(params);
  cache.x = x;
  cache.plan = detail::pooling_plan(params.compression, c, x.extent(1), x.extent(2));
  cache.compressed = cache.plan ? detail::pool_with(x, *cache.plan) : reduce_mean_hw(x);

  cache.pre = Tensor({hid});
  cache.hidden = Tensor({hid});
  for (std::size_t j = 0; j < hid; ++j) {
    Real acc = params.b1[j];
    for (std::size_t k = 0; k < c; ++k) acc += params.w1(j, k) * (params.input_scale * cache.compressed[k]);
    cache.pre[j] = acc;
    cache.hidden[j] = acc > 0 ? acc : Real{0};
  }
  cache.att = Tensor({c});
  for (std::size_t k = 0; k < c; ++k) {
    Real acc = params.b2[k];
    for (std::size_t j = 0; j < hid; ++j) acc += params.w2(k, j) * cache.hidden[j];
    cache.att[k] = detail::stable_sigmoid(acc);
  }
  Tensor att = cache.att;
  return {std::move(att), std::move(cache)};
}

/// out[c, i, j] = att[c] * X[c, i, j]
inline Tensor apply_attention(const Tensor& x, const Tensor& att) {
  require_rank(x, 3, "apply_attention");
  if (att.rank() != 1 || att.extent(0) != x.extent(0)) {
    throw ShapeError("apply_attention: attention " + shape_str(att.shape()) + " for input " +
                     shape_str(x.shape()));
  }
  Tensor out = x;
  for (std::size_t c = 0; c < x.extent(0); ++c)
    for (auto& v : out.plane(c)) v *= att[c];
  return out;
}

struct AttentionGrads {
  Tensor x;
  Tensor w1;
  Tensor b1;
  Tensor w2;
  Tensor b2;
  /// d/dT for a trainable compression tensor, d/dalpha for NAS; empty otherwise.
  std::optional<Tensor> compression;
};

struct BackwardOptions {
  /// When false, grad_x carries only the direct att[c] * grad_out[c] term.
  bool attention_path = true;
};

/// Gradients of a scalar loss through apply_attention(X, attention_forward(X).att).
inline AttentionGrads attention_backward(const Tensor& grad_out, const AttentionCache& cache,
                                         BackwardOptions opts = {}) {
  if (cache.params == nullptr) throw std::logic_error("attention_backward: empty cache");
  const AttentionParams& params = *cache.params;
  if (params_fingerprint(params) != cache.fingerprint) {
    throw std::logic_error("attention_backward: cache is stale (params changed since forward)");
  }
  require_same_shape(grad_out, cache.x, "attention_backward");
  const Tensor& x = cache.x;
  const std::size_t c = params.channels, hid = params.hidden();
  const std::size_t hw = x.extent(1) * x.extent(2);

  AttentionGrads g{Tensor(x.shape()), Tensor(params.w1.shape()), Tensor(params.b1.shape()),
                   Tensor(params.w2.shape()), Tensor(params.b2.shape()), std::nullopt};

  // direct path and d loss / d att
  Tensor dlogit({c});
  for (std::size_t k = 0; k < c; ++k) {
    const auto go = grad_out.plane(k);
    const auto xv = x.plane(k);
    auto gx = g.x.plane(k);
    Real datt{0};
    for (std::size_t i = 0; i < hw; ++i) {
      datt += go[i] * xv[i];
      gx[i] = cache.att[k] * go[i];
    }
    dlogit[k] = datt * cache.att[k] * (Real{1} - cache.att[k]);
  }

  Tensor dpre({hid});
  for (std::size_t k = 0; k < c; ++k) {
    g.b2[k] = dlogit[k];
    for (std::size_t j = 0; j < hid; ++j) {
      g.w2(k, j) = dlogit[k] * cache.hidden[j];
      dpre[j] += params.w2(k, j) * dlogit[k];
    }
  }
  for (std::size_t j = 0; j < hid; ++j) {
    if (!(cache.pre[j] > 0)) dpre[j] = 0;
    g.b1[j] = dpre[j];
  }
  Tensor dz({c}); // d loss / d compressed (unscaled)
  for (std::size_t j = 0; j < hid; ++j)
    for (std::size_t k = 0; k < c; ++k) {
      g.w1(j, k) = dpre[j] * (params.input_scale * cache.compressed[k]);
      dz[k] += params.w1(j, k) * dpre[j];
    }
  for (auto& v : dz.data()) v *= params.input_scale;

  // attention path into X
  if (opts.attention_path) {
    if (!cache.plan) {
      const Real inv = Real{1} / static_cast<Real>(hw);
      for (std::size_t k = 0; k < c; ++k)
        for (auto& v : g.x.plane(k)) v += dz[k] * inv;
    } else {
      const std::size_t per = c / cache.plan->parts;
      for (std::size_t k = 0; k < c; ++k) {
        const auto kern = cache.plan->kernels.plane(k / per);
        auto gx = g.x.plane(k);
        for (std::size_t i = 0; i < hw; ++i) gx[i] += dz[k] * kern[i];
      }
    }
  }

  // compression parameters
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, LearnableCompression>) {
          if (!s.tensor.trainable) return;
          const std::size_t n = s.tensor.weights.extent(0), per = c / n;
          Tensor gt(s.tensor.weights.shape());
          for (std::size_t k = 0; k < c; ++k) {
            auto dst = gt.plane(k / per);
            const auto xv = x.plane(k);
            for (std::size_t i = 0; i < hw; ++i) dst[i] += dz[k] * xv[i];
          }
          g.compression = std::move(gt);
        } else if constexpr (std::is_same_v<S, NasCompression>) {
          const auto& alpha = s.state.alpha;
          const std::size_t n = alpha.extent(0), gh = alpha.extent(1), gw = alpha.extent(2);
          const std::size_t per = c / n;
          const Real temp = s.state.temperature;
          Tensor ga(alpha.shape());
          for (std::size_t p = 0; p < n; ++p) {
            // S_p = sum_{c in part} dz[c] X[c]; d/dw_(u,v) = <S_p, B_(u,v)> = dct2(S_p)[u,v]
            Tensor sp({x.extent(1), x.extent(2)});
            for (std::size_t k = p * per; k < (p + 1) * per; ++k) {
              const auto xv = x.plane(k);
              for (std::size_t i = 0; i < hw; ++i) sp[i] += dz[k] * xv[i];
            }
            const Tensor spec = dct2(sp);
            const Tensor wts = nas_weights(alpha.plane(p), {gh, gw}, temp);
            Real mean{0};
            for (std::size_t u = 0; u < gh; ++u)
              for (std::size_t v = 0; v < gw; ++v) mean += wts(u, v) * spec(u, v);
            for (std::size_t u = 0; u < gh; ++u)
              for (std::size_t v = 0; v < gw; ++v) ga(p, u, v) = wts(u, v) * (spec(u, v) - mean) / temp;
          }
          g.compression = std::move(ga);
        }
      },
      params.compression);
  return g;
}

} // namespace fca

#endif
