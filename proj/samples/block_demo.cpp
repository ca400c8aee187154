// Builds one attention block per compression strategy on a random feature
// map and prints the channel gates and the low-frequency assignment.

#include <iostream>
#include <random>

#include "fca/attention.hpp"
#include "fca/selection.hpp"

int main() {
  constexpr std::size_t kChannels = 16, kHeight = 7, kWidth = 7;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  fca::Tensor x({kChannels, kHeight, kWidth});
  for (auto& v : x.data()) v = normal(rng);

  const fca::FrequencyGrid grid{kHeight, kWidth};
  const auto lf = fca::assign_lf(kChannels, 4, grid);

  std::vector<fca::Compression> strategies{
      fca::GapCompression{},
      fca::MultiSpectralCompression{lf},
      fca::make_learnable(lf, fca::TensorInit::Dct, true, rng),
      fca::NasCompression{fca::make_nas_state(4, grid, 0.5)},
  };
  for (const auto& s : strategies) {
    auto p = fca::make_attention_params(kChannels, 4, s, rng);
    if (!std::holds_alternative<fca::GapCompression>(s)) p.input_scale = 1.0 / (kHeight * kWidth);
    const auto fwd = fca::attention_forward(x, p);
    std::cout << fca::compression_name(s) << " (" << fca::param_count(kChannels, 4, s) << " params):";
    for (double a : fwd.att.data()) std::cout << ' ' << a;
    std::cout << '\n';
  }

  std::cout << "lf k=4:";
  for (auto c : lf.components) std::cout << ' ' << fca::to_string(c);
  std::cout << '\n';
}
