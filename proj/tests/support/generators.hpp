#pragma once

// Seeded random inputs for property tests.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "event_distill/event.hpp"
#include "event_distill/feature.hpp"

namespace event_distill::testing {

inline EventStream random_stream(std::mt19937_64& rng, std::size_t max_events = 200) {
  std::uniform_int_distribution<int> dim(1, 640);
  const SensorGeometry g{static_cast<std::uint16_t>(dim(rng)),
                         static_cast<std::uint16_t>(dim(rng))};
  std::uniform_int_distribution<std::size_t> count(0, max_events);
  std::uniform_int_distribution<std::uint64_t> t(0, std::uint64_t{1} << 40);
  std::vector<Event> events(count(rng));
  for (auto& e : events) {
    e.t = t(rng);
    e.x = static_cast<std::uint16_t>(rng() % g.width);
    e.y = static_cast<std::uint16_t>(rng() % g.height);
    e.p = (rng() & 1) ? 1 : -1;
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.t < b.t; });
  return EventStream(g, std::move(events));
}

inline FeatureVector random_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<float> normal;
  FeatureVector v = FeatureVector::zeros(dim);
  for (auto& x : v.values) x = normal(rng);
  return v;
}

/// Vectors drawn from a small palette (plus zero vectors), so that exact
/// duplicates and tied linkages are common.
inline std::vector<FeatureVector> palette_vectors(std::mt19937_64& rng, std::size_t n,
                                                  std::size_t dim) {
  std::uniform_int_distribution<int> palette_size(1, 4);
  std::vector<FeatureVector> palette;
  const int p = palette_size(rng);
  for (int i = 0; i < p; ++i) palette.push_back(random_vector(rng, dim));
  palette.push_back(FeatureVector::zeros(dim));
  std::vector<FeatureVector> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(palette[rng() % palette.size()]);
  return out;
}

}  // namespace event_distill::testing
