#ifndef FCA_EXPERIMENTS_HPP
#define FCA_EXPERIMENTS_HPP

// Multi-run experiments on the synthetic task: per-component scoring,
// component-count sweeps, learnable-tensor comparisons and NAS search.
// Independent runs go through parallel_map; results come back in input order
// whatever the worker count, so tables are identical for 1 or N workers.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fca/model.hpp"
#include "fca/selection.hpp"
#include "fca/train.hpp"

namespace fca {

template <typename F>
auto parallel_map(std::size_t n, std::size_t workers, F&& f) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct Summary {
  Real mean = 0;
  Real std = 0; // sample standard deviation; 0 for a single value
};

inline Summary summarize(const std::vector<Real>& xs) {
  Summary s;
  if (xs.empty()) return s;
  for (Real x : xs) s.mean += x;
  s.mean /= static_cast<Real>(xs.size());
  if (xs.size() > 1) {
    Real ss{0};
    for (Real x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<Real>(xs.size() - 1));
  }
  return s;
}

inline std::vector<Real> final_accuracies(const std::vector<RunRecord>& runs) {
  std::vector<Real> out;
  for (const auto& r : runs) out.push_back(r.final_val_accuracy);
  return out;
}

/// Trains `cfg` once per seed.
inline std::vector<RunRecord> run_seeds(const ModelConfig& cfg, const DataSplit& data, const TrainHyper& hyper,
                                        const std::vector<std::uint64_t>& seeds, std::size_t workers = 1,
                                        const std::string& label = {}) {
  validate(cfg);
  return parallel_map(seeds.size(), workers, [&](std::size_t i) {
    TrainHyper h = hyper;
    h.seed = seeds[i];
    return train(cfg, data, h, label);
  });
}

// --- per-component scoring ----------------------------------------------------

inline void require_in_attention_grid(const ModelConfig& cfg, Component c) {
  const auto grid = attention_grid(cfg);
  if (!grid.contains(c))
    throw std::out_of_range("component " + to_string(c) + " is outside the " + std::to_string(grid.height) +
                                "x" + std::to_string(grid.width) + " map at the last attention site");
}

/// Adds fresh attention of kind `cfg.attention` to a copy of `base` and fine-tunes the whole model for `budget` epochs.
inline RunRecord fine_tune_with_attention(const Model& base, ModelConfig cfg, const DataSplit& data,
                                          std::size_t budget, const TrainHyper& hyper, const std::string& label = {}) {
  Model m = attach_attention(base, std::move(cfg), hyper.seed);
  TrainHyper h = hyper;
  h.epochs = budget;
  h.lr = hyper.finetune_lr;
  return fit(m, data, h, label);
}

inline ModelConfig single_component_config(const ModelConfig& base, Component c) {
  ModelConfig cfg = base;
  cfg.attention = AttentionKind::MultiSpectral;
  cfg.components = {c};
  return cfg;
}

inline ModelConfig gap_config(const ModelConfig& base) {
  ModelConfig cfg = base;
  cfg.attention = AttentionKind::Gap;
  cfg.components.clear();
  return cfg;
}

/// Held-out accuracy after fine-tuning `base` with single-component attention.
inline ComponentScore evaluate_component(const Model& base, Component c, const DataSplit& data, std::size_t budget,
                                         const TrainHyper& hyper) {
  require_in_attention_grid(base.config, c);
  const auto rec = fine_tune_with_attention(base, single_component_config(base.config, c), data, budget, hyper,
                                            "component " + to_string(c));
  return {c, rec.final_val_accuracy};
}

/// Scores every component of `grid` in lf order.
inline std::vector<ComponentScore> evaluate_grid(const Model& base, const FrequencyGrid& grid, const DataSplit& data,
                                                 std::size_t budget, const TrainHyper& hyper,
                                                 std::size_t workers = 1) {
  const auto site = attention_grid(base.config);
  if (grid.height > site.height || grid.width > site.width)
    throw std::out_of_range("grid " + std::to_string(grid.height) + "x" + std::to_string(grid.width) +
                                " exceeds the " + std::to_string(site.height) + "x" + std::to_string(site.width) +
                                " map at the last attention site");
  const auto comps = lf_order(grid);
  return parallel_map(comps.size(), workers,
                      [&](std::size_t i) { return evaluate_component(base, comps[i], data, budget, hyper); });
}

/// Trains the attention-free base model that component scoring starts from.
inline std::pair<Model, RunRecord> pretrain_base(ModelConfig cfg, const DataSplit& data, const TrainHyper& hyper) {
  cfg.attention = AttentionKind::None;
  cfg.components.clear();
  Model m = init_model(cfg, hyper.seed);
  auto rec = fit(m, data, hyper, "base");
  return {std::move(m), std::move(rec)};
}

// --- component-count sweep ------------------------------------------------------

enum class Criterion { LF, TS };

inline const char* to_string(Criterion c) { return c == Criterion::LF ? "lf" : "ts"; }

inline Criterion criterion_from_string(const std::string& s) {
  if (s == "lf") return Criterion::LF;
  if (s == "ts") return Criterion::TS;
  throw std::invalid_argument("unknown criterion '" + s + "' (expected lf or ts)");
}

struct SweepRow {
  std::size_t k = 0;
  std::size_t k_used = 0; // k capped at the grid size
  std::vector<Component> components;
  Summary accuracy;
  std::vector<Real> per_seed;
  std::vector<RunRecord> runs;
};

/// k is capped at the last-site grid size; the capped value must divide every stage's channel count.
inline std::size_t capped_k(const ModelConfig& cfg, std::size_t k) {
  if (k == 0) throw std::invalid_argument("sweep: k must be positive");
  const std::size_t used = std::min(k, attention_grid(cfg).size());
  for (auto c : cfg.channels)
    if (c % used != 0)
      throw std::invalid_argument("sweep: k=" + std::to_string(used) + " does not divide channel count " +
                                  std::to_string(c));
  return used;
}

inline std::vector<Component> select_components(Criterion crit, const ModelConfig& cfg, std::size_t k_used,
                                                const std::vector<ComponentScore>& scores) {
  const auto grid = attention_grid(cfg);
  const std::size_t channels = cfg.channels.back();
  if (crit == Criterion::LF) return assign_lf(channels, k_used, grid).components;
  if (scores.empty()) throw std::invalid_argument("sweep: ts criterion needs component scores");
  return assign_ts(channels, k_used, scores, grid).components;
}

inline std::vector<SweepRow> sweep_k(Criterion crit, const std::vector<std::size_t>& ks, const DataSplit& data,
                                     const std::vector<std::uint64_t>& seeds, const ModelConfig& base,
                                     const TrainHyper& hyper, const std::vector<ComponentScore>& scores = {},
                                     std::size_t workers = 1) {
  std::vector<SweepRow> rows;
  std::vector<ModelConfig> cfgs;
  for (auto k : ks) {
    SweepRow row;
    row.k = k;
    row.k_used = capped_k(base, k);
    row.components = select_components(crit, base, row.k_used, scores);
    ModelConfig cfg = base;
    cfg.attention = AttentionKind::MultiSpectral;
    cfg.components = row.components;
    validate(cfg);
    cfgs.push_back(std::move(cfg));
    rows.push_back(std::move(row));
  }
  const std::size_t ns = seeds.size();
  const auto runs = parallel_map(rows.size() * ns, workers, [&](std::size_t i) {
    TrainHyper h = hyper;
    h.seed = seeds[i % ns];
    return train(cfgs[i / ns], data, h, std::string(to_string(crit)) + std::to_string(rows[i / ns].k));
  });
  for (std::size_t r = 0; r < rows.size(); ++r) {
    rows[r].runs.assign(runs.begin() + static_cast<std::ptrdiff_t>(r * ns),
                        runs.begin() + static_cast<std::ptrdiff_t>((r + 1) * ns));
    rows[r].per_seed = final_accuracies(rows[r].runs);
    rows[r].accuracy = summarize(rows[r].per_seed);
  }
  return rows;
}

// --- learnable tensors --------------------------------------------------------------

struct LearnMode {
  TensorInit init = TensorInit::Dct;
  bool trainable = false;
};

inline std::string mode_name(LearnMode m) {
  return std::string(m.trainable ? "L" : "F") + (m.init == TensorInit::Dct ? "D" : "R");
}

inline LearnMode mode_from_string(const std::string& s) {
  if (s == "FR") return {TensorInit::Random, false};
  if (s == "LR") return {TensorInit::Random, true};
  if (s == "LD") return {TensorInit::Dct, true};
  if (s == "FD") return {TensorInit::Dct, false};
  throw std::invalid_argument("unknown mode '" + s + "' (expected FR, LR, LD or FD)");
}

inline std::vector<LearnMode> all_learn_modes() {
  return {{TensorInit::Random, false}, {TensorInit::Random, true}, {TensorInit::Dct, true}, {TensorInit::Dct, false}};
}

/// FD is plain MultiSpectral: fixed DCT bases need no tensor of their own.
inline ModelConfig learn_mode_config(const ModelConfig& base, LearnMode mode) {
  ModelConfig cfg = base;
  if (mode.init == TensorInit::Dct && !mode.trainable) {
    cfg.attention = AttentionKind::MultiSpectral;
  } else {
    cfg.attention = AttentionKind::Learnable;
    cfg.tensor_init = mode.init;
    cfg.tensor_trainable = mode.trainable;
  }
  return cfg;
}

struct LearnRow {
  std::string mode;
  std::size_t trainable_params = 0;
  Summary accuracy;
  std::vector<Real> per_seed;
  std::vector<RunRecord> runs;
};

/// base.components fixes the frequencies every mode starts from.
inline std::vector<LearnRow> compare_learnable(const std::vector<LearnMode>& modes, const DataSplit& data,
                                               const std::vector<std::uint64_t>& seeds, const ModelConfig& base,
                                               const TrainHyper& hyper, std::size_t workers = 1) {
  if (modes.empty()) throw std::invalid_argument("compare_learnable: no modes");
  if (base.components.empty()) throw std::invalid_argument("compare_learnable: base config has no components");
  std::vector<ModelConfig> cfgs;
  for (auto m : modes) {
    cfgs.push_back(learn_mode_config(base, m));
    validate(cfgs.back());
  }
  const std::size_t ns = seeds.size();
  const auto runs = parallel_map(modes.size() * ns, workers, [&](std::size_t i) {
    TrainHyper h = hyper;
    h.seed = seeds[i % ns];
    return train(cfgs[i / ns], data, h, mode_name(modes[i / ns]));
  });
  std::vector<LearnRow> rows;
  for (std::size_t r = 0; r < modes.size(); ++r) {
    LearnRow row;
    row.mode = mode_name(modes[r]);
    row.trainable_params = trainable_param_count(init_model(cfgs[r], seeds.empty() ? 0 : seeds.front()));
    row.runs.assign(runs.begin() + static_cast<std::ptrdiff_t>(r * ns),
                    runs.begin() + static_cast<std::ptrdiff_t>((r + 1) * ns));
    row.per_seed = final_accuracies(row.runs);
    row.accuracy = summarize(row.per_seed);
    rows.push_back(std::move(row));
  }
  return rows;
}

// --- NAS --------------------------------------------------------------------------

/// Trains the relaxed model; the record carries the derived assignment for the last stage.
inline RunRecord nas_search(ModelConfig cfg, const DataSplit& data, const TrainHyper& hyper) {
  cfg.attention = AttentionKind::Nas;
  return train(cfg, data, hyper, "nas");
}

} // namespace fca

#endif
