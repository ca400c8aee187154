#ifndef FCA_SYNTHETIC_HPP
#define FCA_SYNTHETIC_HPP

// Frequency-band classification data. Each class owns a disjoint set of DCT
// components; a sample is a random-amplitude mix of its class's orthonormal
// bases plus white Gaussian noise.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "fca/dct.hpp"
#include "fca/tensor.hpp"

namespace fca {

inline std::vector<std::vector<Component>> default_class_bands() {
  return {{{0, 1}}, {{1, 0}}, {{1, 1}}, {{0, 2}, {2, 0}}};
}

struct SyntheticSpec {
  std::size_t height = 16;
  std::size_t width = 16;
  std::size_t num_classes = 4;
  std::size_t samples_per_class = 500;
  Real noise_sigma = Real{0.3};
  std::vector<std::vector<Component>> class_bands = default_class_bands();
  /// Band coefficients are drawn as sign * U(amplitude_min, amplitude_max).
  Real amplitude_min = 1;
  Real amplitude_max = 2;
  std::uint64_t seed = 0;
};

struct Dataset {
  std::vector<Tensor> inputs; // each [1 x H x W]
  std::vector<std::size_t> labels;
  std::size_t num_classes = 0;

  std::size_t size() const noexcept { return inputs.size(); }

  /// All samples stacked as [N x 1 x H x W].
  Tensor as_tensor() const {
    if (inputs.empty()) throw std::invalid_argument("dataset: empty");
    Shape s{inputs.size()};
    for (auto e : inputs.front().shape()) s.push_back(e);
    Tensor out(s);
    const std::size_t per = inputs.front().size();
    for (std::size_t i = 0; i < inputs.size(); ++i)
      std::copy(inputs[i].data().begin(), inputs[i].data().end(), out.data().begin() + static_cast<std::ptrdiff_t>(i * per));
    return out;
  }
};

struct DataSplit {
  Dataset train;
  Dataset validation;
};

inline void validate(const SyntheticSpec& spec) {
  if (spec.height == 0 || spec.width == 0) throw std::invalid_argument("synthetic: empty image");
  if (spec.num_classes == 0 || spec.class_bands.size() != spec.num_classes) {
    throw std::invalid_argument("synthetic: need one band set per class (" + std::to_string(spec.num_classes) +
                                " classes, " + std::to_string(spec.class_bands.size()) + " band sets)");
  }
  if (!(spec.noise_sigma >= 0)) throw std::invalid_argument("synthetic: noise_sigma must be >= 0");
  if (!(spec.amplitude_min > 0) || spec.amplitude_max < spec.amplitude_min)
    throw std::invalid_argument("synthetic: need 0 < amplitude_min <= amplitude_max");
  std::set<Component> used;
  bool has_high_only = false;
  for (const auto& bands : spec.class_bands) {
    if (bands.empty()) throw std::invalid_argument("synthetic: class with no bands");
    bool high_only = true;
    for (auto c : bands) {
      require_component_in_range(spec.height, spec.width, c, "synthetic");
      if (!used.insert(c).second) throw std::invalid_argument("synthetic: class bands overlap at " + to_string(c));
      if (c.u + c.v < 2) high_only = false;
    }
    has_high_only = has_high_only || high_only;
  }
  if (!has_high_only)
    throw std::invalid_argument("synthetic: at least one class must use only components with u+v >= 2");
}

/// Samples are interleaved by class: sample i has label i % num_classes.
inline Dataset gen_synthetic(const SyntheticSpec& spec) {
  validate(spec);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<Real> mag(spec.amplitude_min, spec.amplitude_max);
  std::bernoulli_distribution sign(0.5);
  std::normal_distribution<Real> noise(Real{0}, spec.noise_sigma > 0 ? spec.noise_sigma : Real{1});

  std::vector<std::vector<Tensor>> bases(spec.num_classes);
  for (std::size_t k = 0; k < spec.num_classes; ++k)
    for (auto c : spec.class_bands[k]) bases[k].push_back(orthonormal_basis(spec.height, spec.width, c.u, c.v));

  Dataset ds;
  ds.num_classes = spec.num_classes;
  const std::size_t n = spec.num_classes * spec.samples_per_class;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t label = i % spec.num_classes;
    Tensor x({1, spec.height, spec.width});
    for (const auto& b : bases[label]) {
      const Real a = (sign(rng) ? Real{1} : Real{-1}) * mag(rng);
      for (std::size_t p = 0; p < b.size(); ++p) x[p] += a * b[p];
    }
    if (spec.noise_sigma > 0)
      for (auto& v : x.data()) v += noise(rng);
    ds.inputs.push_back(std::move(x));
    ds.labels.push_back(label);
  }
  return ds;
}

/// Stratified split: per class, a seeded shuffle then the first `train_fraction` go to training.
inline DataSplit split_stratified(const Dataset& ds, Real train_fraction = Real{0.8}, std::uint64_t seed = 0) {
  if (!(train_fraction > 0 && train_fraction < 1)) throw std::invalid_argument("split: fraction must be in (0,1)");
  std::mt19937_64 rng(seed ^ 0x5eedf00dULL);
  std::vector<std::vector<std::size_t>> by_class(ds.num_classes);
  for (std::size_t i = 0; i < ds.size(); ++i) by_class.at(ds.labels[i]).push_back(i);
  std::vector<std::size_t> train_idx, val_idx;
  for (auto& idx : by_class) {
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto cut = static_cast<std::size_t>(std::llround(train_fraction * static_cast<Real>(idx.size())));
    train_idx.insert(train_idx.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(cut));
    val_idx.insert(val_idx.end(), idx.begin() + static_cast<std::ptrdiff_t>(cut), idx.end());
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(val_idx.begin(), val_idx.end());
  DataSplit split;
  split.train.num_classes = split.validation.num_classes = ds.num_classes;
  for (auto i : train_idx) {
    split.train.inputs.push_back(ds.inputs[i]);
    split.train.labels.push_back(ds.labels[i]);
  }
  for (auto i : val_idx) {
    split.validation.inputs.push_back(ds.inputs[i]);
    split.validation.labels.push_back(ds.labels[i]);
  }
  return split;
}

/// Classifies by the orthonormal DCT energy falling in each class's bands.
inline std::size_t band_energy_classify(const Tensor& sample, const SyntheticSpec& spec) {
  const Tensor img = sample.rank() == 3 ? sample.reshaped({sample.extent(1), sample.extent(2)}) : sample;
  const Tensor f = dct2(img);
  std::size_t best = 0;
  Real best_energy = -1;
  for (std::size_t k = 0; k < spec.class_bands.size(); ++k) {
    Real e{0};
    for (auto c : spec.class_bands[k]) {
      const Real su = (c.u == 0 ? Real{1} : Real{2}) / static_cast<Real>(spec.height);
      const Real sv = (c.v == 0 ? Real{1} : Real{2}) / static_cast<Real>(spec.width);
      const Real coef = f(c.u, c.v) * std::sqrt(su * sv);
      e += coef * coef;
    }
    if (e > best_energy) {
      best_energy = e;
      best = k;
    }
  }
  return best;
}

inline Real band_energy_accuracy(const Dataset& ds, const SyntheticSpec& spec) {
  if (ds.size() == 0) return 0;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) hit += band_energy_classify(ds.inputs[i], spec) == ds.labels[i];
  return static_cast<Real>(hit) / static_cast<Real>(ds.size());
}

} // namespace fca

#endif
