#pragma once

// Reference average-linkage clustering for tests. Recomputes every
// cross-cluster mean distance from the original points at each merge, with
// its own normalization code, so it shares nothing with the library's
// incremental implementation except the documented conventions:
//   - zero vectors: similarity 1 with each other, 0 with anything else
//   - ties: linkages within 1e-12 of the minimum, smallest (min, min) key wins

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "event_distill/feature.hpp"

namespace event_distill::testing {

inline std::vector<std::vector<std::size_t>> naive_hac(const std::vector<FeatureVector>& points,
                                                       std::size_t k) {
  const std::size_t n = points.size();
  std::vector<std::vector<double>> unit(n);
  std::vector<bool> zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    long double norm2 = 0;
    for (float v : points[i].values) norm2 += static_cast<long double>(v) * v;
    zero[i] = norm2 == 0;
    for (float v : points[i].values) {
      unit[i].push_back(zero[i] ? 0.0 : static_cast<double>(v / std::sqrt(norm2)));
    }
  }
  auto distance = [&](std::size_t i, std::size_t j) {
    if (zero[i] || zero[j]) return (zero[i] && zero[j]) ? 0.0 : 1.0;
    double dot = 0;
    for (std::size_t d = 0; d < unit[i].size(); ++d) dot += unit[i][d] * unit[j][d];
    return 1.0 - std::clamp(dot, -1.0, 1.0);
  };

  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < n; ++i) clusters.push_back({i});

  while (clusters.size() > k) {
    std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> links;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double sum = 0;
        for (auto i : clusters[a]) {
          for (auto j : clusters[b]) sum += distance(i, j);
        }
        const double avg = sum / static_cast<double>(clusters[a].size() * clusters[b].size());
        links.push_back({avg, {a, b}});
        best = std::min(best, avg);
      }
    }
    std::pair<std::size_t, std::size_t> chosen{0, 0};
    std::pair<std::size_t, std::size_t> chosen_key{n, n};
    for (const auto& [avg, ab] : links) {
      if (avg > best + 1e-12) continue;
      const auto ma = *std::min_element(clusters[ab.first].begin(), clusters[ab.first].end());
      const auto mb = *std::min_element(clusters[ab.second].begin(), clusters[ab.second].end());
      const std::pair key{std::min(ma, mb), std::max(ma, mb)};
      if (key < chosen_key) {
        chosen_key = key;
        chosen = ab;
      }
    }
    auto merged = clusters[chosen.first];
    merged.insert(merged.end(), clusters[chosen.second].begin(), clusters[chosen.second].end());
    std::sort(merged.begin(), merged.end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(chosen.second));
    clusters[chosen.first] = std::move(merged);
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
  return clusters;
}

}  // namespace event_distill::testing
