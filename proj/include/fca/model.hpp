#ifndef FCA_MODEL_HPP
#define FCA_MODEL_HPP

// Tiny CNN with a pluggable channel-attention block after every stage:
//   [conv3x3 (stride s) -> relu -> attention] x stages -> GAP -> linear -> softmax
// Convolutions and the classifier carry no bias, so the network is positively
// homogeneous in each stage's output scale.

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fca/attention.hpp"
#include "fca/conv.hpp"
#include "fca/selection.hpp"
#include "fca/synthetic.hpp"
#include "fca/tensor.hpp"

namespace fca {

enum class AttentionKind { None, Gap, MultiSpectral, Learnable, Nas };

inline const char* to_string(AttentionKind k) {
  switch (k) {
    case AttentionKind::None: return "none";
    case AttentionKind::Gap: return "gap";
    case AttentionKind::MultiSpectral: return "ms";
    case AttentionKind::Learnable: return "learnable";
    case AttentionKind::Nas: return "nas";
  }
  return "?";
}

inline AttentionKind attention_kind_from_string(const std::string& s) {
  for (auto k : {AttentionKind::None, AttentionKind::Gap, AttentionKind::MultiSpectral, AttentionKind::Learnable,
                 AttentionKind::Nas})
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown attention strategy '" + s + "' (none|gap|ms|learnable|nas)");
}

struct ModelConfig {
  std::size_t height = 16;
  std::size_t width = 16;
  std::size_t in_channels = 1;
  std::size_t num_classes = 4;
  std::vector<std::size_t> channels{16, 32, 64};
  std::vector<std::size_t> strides{1, 2, 2};
  std::size_t reduction = 4;

  AttentionKind attention = AttentionKind::None;
  /// Components for MultiSpectral / Learnable, indexed on the last stage's grid and shared by every stage.
  std::vector<Component> components{{0, 0}};
  TensorInit tensor_init = TensorInit::Dct;
  bool tensor_trainable = false;
  std::size_t nas_parts = 4;
  Real nas_temperature = 1;
  Real nas_lr_multiplier = 10;

  /// Initial attention bias; gates start near sigmoid(b2).
  Real attention_bias = 2;
  /// Scale of the second fc layer's initial draw. attach_attention always uses 0 so fine-tuning starts neutral.
  Real attention_w2_scale = 1;
  /// Scale DCT-style compression by 1/HW so the (0,0) component lands on GAP's scale.
  bool normalize_dct_pooling = true;
  /// Debug switch: run the attention head but scale by ones.
  bool force_attention_ones = false;
};

/// Spatial extent after each stage.
inline std::vector<std::pair<std::size_t, std::size_t>> stage_maps(const ModelConfig& cfg) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t h = cfg.height, w = cfg.width;
  for (auto s : cfg.strides) {
    h = conv_out_extent(h, s);
    w = conv_out_extent(w, s);
    out.emplace_back(h, w);
  }
  return out;
}

/// Frequency grid every attention site can represent (the last stage's map).
inline FrequencyGrid attention_grid(const ModelConfig& cfg) {
  const auto maps = stage_maps(cfg);
  return {maps.back().first, maps.back().second};
}

inline void validate(const ModelConfig& cfg) {
  if (cfg.channels.empty() || cfg.channels.size() != cfg.strides.size())
    throw std::invalid_argument("model: channels and strides must be non-empty and equally long");
  if (cfg.num_classes < 2) throw std::invalid_argument("model: need at least two classes");
  for (auto s : cfg.strides)
    if (s == 0) throw std::invalid_argument("model: stride must be positive");
  const auto grid = attention_grid(cfg);
  if (cfg.attention == AttentionKind::None) return;
  for (auto c : cfg.channels) validate_head(c, cfg.reduction);
  std::size_t parts = 0;
  if (cfg.attention == AttentionKind::MultiSpectral || cfg.attention == AttentionKind::Learnable) {
    if (cfg.components.empty()) throw std::invalid_argument("model: no frequency components");
    for (auto c : cfg.components) {
      if (!grid.contains(c)) {
        throw std::out_of_range("model: component " + to_string(c) + " outside the " +
                                std::to_string(grid.height) + "x" + std::to_string(grid.width) +
                                " map at the last attention site");
      }
    }
    parts = cfg.components.size();
  } else if (cfg.attention == AttentionKind::Nas) {
    if (!(cfg.nas_temperature > 0)) throw std::invalid_argument("model: nas temperature must be positive");
    parts = cfg.nas_parts;
  }
  if (parts) {
    for (auto c : cfg.channels)
      if (parts == 0 || c % parts != 0) {
        throw std::invalid_argument("model: " + std::to_string(parts) + " frequency parts do not divide " +
                                    std::to_string(c) + " channels");
      }
  }
}

struct Model {
  ModelConfig config;
  std::vector<Tensor> conv;               // [Co x Ci x 3 x 3] per stage
  std::vector<AttentionParams> attention; // one per stage, empty for AttentionKind::None
  Tensor classifier;                      // [K x C_last]
  Tensor nas_alpha;                       // [n x GH x GW], shared by every site (Nas only)
};

namespace detail {

template <typename Rng>
Compression site_compression(const ModelConfig& cfg, std::size_t channels, std::size_t h, std::size_t w,
                             Rng& rng) {
  switch (cfg.attention) {
    case AttentionKind::Gap: return GapCompression{};
    case AttentionKind::MultiSpectral:
      return MultiSpectralCompression{make_assignment(channels, h, w, cfg.components)};
    case AttentionKind::Learnable:
      return make_learnable(make_assignment(channels, h, w, cfg.components), cfg.tensor_init,
                            cfg.tensor_trainable, rng);
    case AttentionKind::Nas: {
      const auto grid = attention_grid(cfg);
      return NasCompression{make_nas_state(cfg.nas_parts, grid, cfg.nas_temperature)};
    }
    case AttentionKind::None: break;
  }
  throw std::logic_error("site_compression: no attention");
}

} // namespace detail

/// Fresh attention heads for every stage, drawn from `rng`.
template <typename Rng>
std::vector<AttentionParams> init_attention(const ModelConfig& cfg, Rng& rng) {
  std::vector<AttentionParams> out;
  if (cfg.attention == AttentionKind::None) return out;
  const auto maps = stage_maps(cfg);
  for (std::size_t s = 0; s < cfg.channels.size(); ++s) {
    const auto [h, w] = maps[s];
    auto comp = detail::site_compression(cfg, cfg.channels[s], h, w, rng);
    auto p = make_attention_params(cfg.channels[s], cfg.reduction, std::move(comp), rng,
                                   HeadInit{1, cfg.attention_w2_scale, 0, cfg.attention_bias});
    if (cfg.normalize_dct_pooling && cfg.attention != AttentionKind::Gap)
      p.input_scale = Real{1} / static_cast<Real>(h * w);
    out.push_back(std::move(p));
  }
  return out;
}

inline Model init_model(const ModelConfig& cfg, std::uint64_t seed) {
  validate(cfg);
  std::mt19937_64 rng(seed);
  Model m;
  m.config = cfg;
  std::size_t cin = cfg.in_channels;
  for (auto cout : cfg.channels) {
    Tensor w({cout, cin, 3, 3});
    const Real bound = std::sqrt(Real{6} / static_cast<Real>(cin * 9)); // He-uniform
    std::uniform_real_distribution<Real> d(-bound, bound);
    for (auto& v : w.data()) v = d(rng);
    m.conv.push_back(std::move(w));
    cin = cout;
  }
  {
    m.classifier = Tensor({cfg.num_classes, cin});
    const Real bound = Real{1} / std::sqrt(static_cast<Real>(cin));
    std::uniform_real_distribution<Real> d(-bound, bound);
    for (auto& v : m.classifier.data()) v = d(rng);
  }
  std::mt19937_64 att_rng(seed ^ 0xa77e5710ULL);
  m.attention = init_attention(cfg, att_rng);
  if (cfg.attention == AttentionKind::Nas) {
    m.nas_alpha = make_nas_state(cfg.nas_parts, attention_grid(cfg), cfg.nas_temperature).alpha;
  }
  return m;
}

/// Copies the shared architecture variables into every site.
inline void sync_nas(Model& m) {
  if (m.config.attention != AttentionKind::Nas) return;
  for (auto& p : m.attention) std::get<NasCompression>(p.compression).state.alpha = m.nas_alpha;
}

/// Base weights from `base`, fresh attention blocks of kind `cfg.attention` seeded by `seed`.
inline Model attach_attention(const Model& base, ModelConfig cfg, std::uint64_t seed) {
  validate(cfg);
  if (cfg.channels != base.config.channels || cfg.strides != base.config.strides ||
      cfg.height != base.config.height || cfg.width != base.config.width)
    throw std::invalid_argument("attach_attention: backbone mismatch");
  cfg.attention_w2_scale = 0;
  Model m;
  m.config = cfg;
  m.conv = base.conv;
  m.classifier = base.classifier;
  std::mt19937_64 att_rng(seed ^ 0xa77e5710ULL);
  m.attention = init_attention(cfg, att_rng);
  if (cfg.attention == AttentionKind::Nas)
    m.nas_alpha = make_nas_state(cfg.nas_parts, attention_grid(cfg), cfg.nas_temperature).alpha;
  return m;
}

struct Trace {
  std::vector<Tensor> stage_in;  // input to each conv
  std::vector<Tensor> conv_out;  // pre-activation
  std::vector<AttentionCache> caches;
  std::vector<Tensor> att;
  Tensor feature; // pooled [C_last]
  Tensor probs;   // softmax [K]
  Real loss = 0;
};

inline Tensor softmax(const Tensor& logits) {
  Real mx = logits[0];
  for (Real v : logits.data()) mx = std::max(mx, v);
  Tensor p(logits.shape());
  Real z{0};
  for (std::size_t k = 0; k < logits.size(); ++k) z += (p[k] = std::exp(logits[k] - mx));
  for (auto& v : p.data()) v /= z;
  return p;
}

/// Forward pass of one [Cin x H x W] sample. The loss is cross-entropy against `label`,
/// smoothed toward the uniform distribution by `smoothing`.
inline Trace forward(const Model& m, const Tensor& x, std::size_t label, Real smoothing = 0) {
  const auto& cfg = m.config;
  Trace t;
  Tensor cur = x;
  for (std::size_t s = 0; s < m.conv.size(); ++s) {
    t.stage_in.push_back(cur);
    Tensor y = conv3x3_forward(cur, m.conv[s], cfg.strides[s]);
    Tensor r = y;
    for (auto& v : r.data()) v = v > 0 ? v : Real{0};
    t.conv_out.push_back(std::move(y));
    if (!m.attention.empty()) {
      auto fwd = attention_forward(r, m.attention[s]);
      Tensor att = cfg.force_attention_ones ? Tensor::ones({r.extent(0)}) : fwd.att;
      cur = apply_attention(r, att);
      t.caches.push_back(std::move(fwd.cache));
      t.att.push_back(std::move(att));
    } else {
      cur = std::move(r);
    }
  }
  t.feature = reduce_mean_hw(cur);
  const std::size_t k_n = m.classifier.extent(0), c_n = m.classifier.extent(1);
  Tensor logits({k_n});
  for (std::size_t k = 0; k < k_n; ++k) {
    Real acc{0};
    for (std::size_t c = 0; c < c_n; ++c) acc += m.classifier(k, c) * t.feature[c];
    logits[k] = acc;
  }
  t.probs = softmax(logits);
  if (label >= t.probs.size()) throw std::out_of_range("forward: label out of range");
  const Real off = smoothing / static_cast<Real>(k_n);
  for (std::size_t k = 0; k < k_n; ++k) {
    const Real target = (k == label ? Real{1} - smoothing : Real{0}) + off;
    if (target != 0) t.loss -= target * std::log(std::max(t.probs[k], std::numeric_limits<Real>::min()));
  }
  return t;
}

/// Parameter-shaped gradient accumulator.
struct ModelGrads {
  std::vector<Tensor> conv;
  std::vector<AttentionGrads> attention;
  Tensor classifier;
  Tensor nas_alpha;
};

inline ModelGrads zero_grads(const Model& m) {
  ModelGrads g;
  for (const auto& w : m.conv) g.conv.emplace_back(w.shape());
  for (const auto& p : m.attention) {
    AttentionGrads a{Tensor(), Tensor(p.w1.shape()), Tensor(p.b1.shape()), Tensor(p.w2.shape()),
                     Tensor(p.b2.shape()), std::nullopt};
    if (const auto* lc = std::get_if<LearnableCompression>(&p.compression); lc && lc->tensor.trainable)
      a.compression = Tensor(lc->tensor.weights.shape());
    g.attention.push_back(std::move(a));
  }
  g.classifier = Tensor(m.classifier.shape());
  if (!m.nas_alpha.empty()) g.nas_alpha = Tensor(m.nas_alpha.shape());
  return g;
}

namespace detail {
inline void add_into(Tensor& dst, const Tensor& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}
} // namespace detail

/// Accumulates d(loss)/d(params) for one traced sample into `g`.
inline void backward(const Model& m, const Trace& t, std::size_t label, ModelGrads& g, Real smoothing = 0) {
  const std::size_t k_n = m.classifier.extent(0), c_n = m.classifier.extent(1);
  const Real off = smoothing / static_cast<Real>(k_n);
  Tensor dfeat({c_n});
  for (std::size_t k = 0; k < k_n; ++k) {
    const Real dl = t.probs[k] - (k == label ? Real{1} - smoothing : Real{0}) - off;
    for (std::size_t c = 0; c < c_n; ++c) {
      g.classifier(k, c) += dl * t.feature[c];
      dfeat[c] += m.classifier(k, c) * dl;
    }
  }
  const std::size_t last = m.conv.size() - 1;
  const auto& last_shape = t.conv_out[last].shape();
  Tensor dcur(last_shape);
  {
    const std::size_t hw = last_shape[1] * last_shape[2];
    const Real inv = Real{1} / static_cast<Real>(hw);
    for (std::size_t c = 0; c < c_n; ++c)
      for (auto& v : dcur.plane(c)) v = dfeat[c] * inv;
  }
  for (std::size_t s = m.conv.size(); s-- > 0;) {
    Tensor dr;
    if (!m.attention.empty()) {
      if (m.config.force_attention_ones) {
        dr = dcur;
      } else {
        auto ag = attention_backward(dcur, t.caches[s]);
        auto& acc = g.attention[s];
        detail::add_into(acc.w1, ag.w1);
        detail::add_into(acc.b1, ag.b1);
        detail::add_into(acc.w2, ag.w2);
        detail::add_into(acc.b2, ag.b2);
        if (ag.compression) {
          if (m.config.attention == AttentionKind::Nas) detail::add_into(g.nas_alpha, *ag.compression);
          else if (acc.compression) detail::add_into(*acc.compression, *ag.compression);
        }
        dr = std::move(ag.x);
      }
    } else {
      dr = std::move(dcur);
    }
    const Tensor& y = t.conv_out[s];
    for (std::size_t i = 0; i < dr.size(); ++i)
      if (!(y[i] > 0)) dr[i] = 0;
    dcur = conv3x3_backward(t.stage_in[s], m.conv[s], m.config.strides[s], dr, g.conv[s], s > 0);
  }
}

struct ParamSlot {
  Tensor* value;
  Tensor* grad;
  Real lr_multiplier;
  bool decay;
};

/// Every trainable tensor paired with its gradient, in a fixed order.
inline std::vector<ParamSlot> param_slots(Model& m, ModelGrads& g) {
  std::vector<ParamSlot> out;
  for (std::size_t s = 0; s < m.conv.size(); ++s) out.push_back({&m.conv[s], &g.conv[s], 1, true});
  for (std::size_t s = 0; s < m.attention.size(); ++s) {
    auto& p = m.attention[s];
    auto& a = g.attention[s];
    out.push_back({&p.w1, &a.w1, 1, true});
    out.push_back({&p.b1, &a.b1, 1, false});
    out.push_back({&p.w2, &a.w2, 1, true});
    out.push_back({&p.b2, &a.b2, 1, false});
    if (auto* lc = std::get_if<LearnableCompression>(&p.compression); lc && lc->tensor.trainable)
      out.push_back({&lc->tensor.weights, &*a.compression, 1, false});
  }
  out.push_back({&m.classifier, &g.classifier, 1, true});
  if (!m.nas_alpha.empty()) out.push_back({&m.nas_alpha, &g.nas_alpha, m.config.nas_lr_multiplier, false});
  return out;
}

inline std::size_t trainable_param_count(const Model& m) {
  std::size_t n = 0;
  for (const auto& w : m.conv) n += w.size();
  n += m.classifier.size();
  for (const auto& p : m.attention) n += param_count(p.channels, p.reduction, p.compression);
  if (m.config.attention == AttentionKind::Nas && !m.attention.empty()) {
    // alpha is shared: counted once, not per site
    n -= m.attention.size() * m.nas_alpha.size();
    n += m.nas_alpha.size();
  }
  return n;
}

struct Evaluation {
  Real accuracy = 0;
  Real loss = 0;
};

inline std::size_t argmax(const Tensor& t) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] > t[best]) best = i;
  return best;
}

inline Evaluation evaluate(const Model& m, const Dataset& ds) {
  Evaluation e;
  if (ds.size() == 0) return e;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto t = forward(m, ds.inputs[i], ds.labels[i]);
    hit += argmax(t.probs) == ds.labels[i];
    e.loss += t.loss;
  }
  e.accuracy = static_cast<Real>(hit) / static_cast<Real>(ds.size());
  e.loss /= static_cast<Real>(ds.size());
  return e;
}

} // namespace fca

#endif
