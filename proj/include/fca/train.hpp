#ifndef FCA_TRAIN_HPP
#define FCA_TRAIN_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fca/frequency.hpp"
#include "fca/model.hpp"
#include "fca/synthetic.hpp"

namespace fca {

enum class LrSchedule { Constant, Cosine };

inline std::string to_string(LrSchedule s) { return s == LrSchedule::Cosine ? "cosine" : "constant"; }

inline LrSchedule parse_lr_schedule(const std::string& name) {
  if (name == "constant") return LrSchedule::Constant;
  if (name == "cosine") return LrSchedule::Cosine;
  throw std::invalid_argument("unknown lr schedule '" + name + "' (constant | cosine)");
}

struct TrainHyper {
  Real lr = Real{0.1};
  LrSchedule schedule = LrSchedule::Constant;
  Real momentum = Real{0.9};
  Real weight_decay = 0;
  Real label_smoothing = 0;
  /// Learning rate when fine-tuning a pretrained base with added attention.
  Real finetune_lr = Real{0.1};
  std::size_t epochs = 30;
  std::size_t batch = 16;
  std::uint64_t seed = 0;
};

inline void validate(const TrainHyper& h) {
  if (!(h.lr >= 0) || !std::isfinite(h.lr)) throw std::invalid_argument("train: lr must be finite and >= 0");
  if (!(h.momentum >= 0 && h.momentum < 1)) throw std::invalid_argument("train: momentum must be in [0, 1)");
  if (!(h.weight_decay >= 0)) throw std::invalid_argument("train: weight_decay must be >= 0");
  if (!(h.label_smoothing >= 0 && h.label_smoothing < 1))
    throw std::invalid_argument("train: label_smoothing must be in [0, 1)");
  if (!(h.finetune_lr >= 0) || !std::isfinite(h.finetune_lr))
    throw std::invalid_argument("train: finetune_lr must be finite and >= 0");
  if (h.batch == 0) throw std::invalid_argument("train: batch must be positive");
}

struct RunRecord {
  std::string label;
  ModelConfig config;
  TrainHyper hyper;
  std::uint64_t seed = 0;
  std::vector<Real> train_loss;     // mean per-sample training loss per epoch
  std::vector<Real> val_accuracy;   // after each epoch
  Real initial_val_accuracy = 0;
  Real final_val_accuracy = 0;
  Real final_val_loss = 0;
  std::size_t trainable_params = 0;
  std::optional<FrequencyAssignment> derived;
  std::string status = "ok"; // "ok" | "diverged"
  std::string diagnostic;
  double wall_seconds = 0; // not part of any deterministic output
};

/// Step size for optimizer step `step` of `total`. Cosine decays from lr towards 0 over the run.
inline Real scheduled_lr(Real lr, LrSchedule schedule, std::size_t step, std::size_t total) {
  if (schedule == LrSchedule::Constant || total == 0) return lr;
  const Real pi = std::acos(Real{-1});
  return lr * Real{0.5} * (Real{1} + std::cos(pi * static_cast<Real>(step) / static_cast<Real>(total)));
}

/// Minibatch SGD with momentum on cross-entropy, in place. Deterministic given hyper.seed.
inline RunRecord fit(Model& m, const DataSplit& data, const TrainHyper& hyper, std::string label = {}) {
  validate(hyper);
  if (data.train.size() == 0) throw std::invalid_argument("train: empty training set");
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.label = std::move(label);
  rec.config = m.config;
  rec.hyper = hyper;
  rec.seed = hyper.seed;
  rec.trainable_params = trainable_param_count(m);

  sync_nas(m);
  rec.initial_val_accuracy = evaluate(m, data.validation).accuracy;

  ModelGrads grads = zero_grads(m);
  ModelGrads velocity = zero_grads(m);
  auto slots = param_slots(m, grads);
  auto vslots = param_slots(m, velocity);

  std::mt19937_64 rng(hyper.seed ^ 0x7a11ULL);
  std::vector<std::size_t> order(data.train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  const std::size_t steps_per_epoch = (order.size() + hyper.batch - 1) / hyper.batch;
  const std::size_t total_steps = steps_per_epoch * hyper.epochs;
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    Real epoch_loss{0};
    std::size_t batches = 0;
    for (std::size_t b0 = 0; b0 < order.size(); b0 += hyper.batch) {
      const std::size_t b1 = std::min(order.size(), b0 + hyper.batch);
      for (auto& s : slots)
        for (auto& v : s.grad->data()) v = 0;
      Real batch_loss{0};
      for (std::size_t i = b0; i < b1; ++i) {
        const std::size_t idx = order[i];
        const auto trace = forward(m, data.train.inputs[idx], data.train.labels[idx], hyper.label_smoothing);
        batch_loss += trace.loss;
        backward(m, trace, data.train.labels[idx], grads, hyper.label_smoothing);
      }
      const Real inv = Real{1} / static_cast<Real>(b1 - b0);
      if (!std::isfinite(batch_loss)) {
        std::ostringstream os;
        os << "loss became non-finite at epoch " << epoch << ", batch " << batches << " (lr=" << hyper.lr << ")";
        rec.status = "diverged";
        rec.diagnostic = os.str();
        rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return rec;
      }
      epoch_loss += batch_loss;
      ++batches;
      const Real step_lr = scheduled_lr(hyper.lr, hyper.schedule, step++, total_steps);
      for (std::size_t k = 0; k < slots.size(); ++k) {
        auto& s = slots[k];
        auto vel = vslots[k].grad->data();
        auto val = s.value->data();
        const auto g = s.grad->data();
        const Real lr = step_lr * s.lr_multiplier;
        for (std::size_t i = 0; i < val.size(); ++i) {
          Real gi = g[i] * inv;
          if (s.decay) gi += hyper.weight_decay * val[i];
          vel[i] = hyper.momentum * vel[i] + gi;
          val[i] -= lr * vel[i];
        }
      }
      sync_nas(m);
    }
    rec.train_loss.push_back(epoch_loss / static_cast<Real>(order.size()));
    rec.val_accuracy.push_back(evaluate(m, data.validation).accuracy);
  }
  const auto ev = evaluate(m, data.validation);
  rec.final_val_accuracy = ev.accuracy;
  rec.final_val_loss = ev.loss;
  if (m.config.attention == AttentionKind::Nas)
    rec.derived = nas_derive({m.nas_alpha, m.config.nas_temperature}, m.config.channels.back());
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

/// Initialises a model from `config` with hyper.seed and trains it.
inline RunRecord train(const ModelConfig& config, const DataSplit& data, const TrainHyper& hyper,
                       std::string label = {}) {
  Model m = init_model(config, hyper.seed);
  return fit(m, data, hyper, std::move(label));
}

} // namespace fca

#endif
