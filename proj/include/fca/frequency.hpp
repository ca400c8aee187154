#ifndef FCA_FREQUENCY_HPP
#define FCA_FREQUENCY_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "fca/dct.hpp"
#include "fca/log.hpp"

namespace fca {

/**
 * Maps channel parts to DCT components.
 *
 * The C channels are split into n = components.size() equal parts; part i
 * covers channels [i*C/n, (i+1)*C/n) and is pooled with components[i].
 */
struct FrequencyAssignment {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<Component> components;

  std::size_t parts() const noexcept { return components.size(); }
  std::size_t part_size() const noexcept { return channels / components.size(); }
  std::size_t part_of(std::size_t channel) const noexcept { return channel / part_size(); }

  friend bool operator==(const FrequencyAssignment&, const FrequencyAssignment&) = default;
};

inline void validate(const FrequencyAssignment& a) {
  if (a.components.empty()) throw std::invalid_argument("frequency assignment: no components");
  if (a.channels == 0 || a.channels % a.components.size() != 0) {
    throw std::invalid_argument("frequency assignment: C=" + std::to_string(a.channels) +
                                " is not divisible by n=" + std::to_string(a.components.size()));
  }
  for (auto c : a.components) require_component_in_range(a.height, a.width, c, "frequency assignment");
}

inline FrequencyAssignment make_assignment(std::size_t channels, std::size_t height, std::size_t width,
                                           std::vector<Component> components) {
  FrequencyAssignment a{channels, height, width, std::move(components)};
  validate(a);
  if (height == 1 && width == 1 && a.parts() > 1) {
    warn("multi-spectral assignment on a 1x1 map: all " + std::to_string(a.parts()) +
         " parts reduce to component (0,0)");
  }
  return a;
}

/// Same components applied to a different channel count or map size.
inline FrequencyAssignment rebind(const FrequencyAssignment& a, std::size_t channels, std::size_t height,
                                  std::size_t width) {
  return make_assignment(channels, height, width, a.components);
}

} // namespace fca

#endif
