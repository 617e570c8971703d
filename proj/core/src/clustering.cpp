#include "event_distill/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "event_distill/error.hpp"
#include "event_distill/similarity.hpp"

namespace event_distill {

double window_diversity(std::span<const FeatureVector> window) {
  if (window.empty()) throw_error(ErrorKind::kInvalidArgument, "diversity of an empty window");
  const UnitVectors unit(window);
  const std::size_t n = unit.size();
  if (n == 1) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) sum += unit.distance(i, j);
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return std::clamp(sum / pairs, 0.0, 2.0);
}

std::size_t cluster_count(double diversity, std::size_t window_size) {
  if (window_size == 0) throw_error(ErrorKind::kInvalidArgument, "window size must be >= 1");
  if (!(diversity >= 0.0 && diversity <= 2.0)) {
    throw_error(ErrorKind::kInvalidArgument,
                fmt::format("diversity {} outside [0, 2]", diversity));
  }
  // std::llround rounds halfway cases away from zero.
  const auto rounded = std::llround(diversity / 2.0 * static_cast<double>(window_size));
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max<long long>(rounded, 0)), 1,
                                 window_size);
}

Clustering hac_average_linkage(std::span<const FeatureVector> vectors,
                               std::size_t target_clusters) {
  const std::size_t n = vectors.size();
  if (target_clusters < 1 || target_clusters > n) {
    throw_error(ErrorKind::kInvalidArgument,
                fmt::format("HAC: target clusters {} outside [1, {}]", target_clusters, n));
  }
  const UnitVectors unit(vectors);

  // Slot i holds the cluster whose smallest member is i; merges always fold
  // the higher slot into the lower one, so slot order is tie-key order.
  std::vector<std::vector<std::size_t>> members(n);
  std::vector<bool> active(n, true);
  // Summed point-pair distances between the clusters in two slots.
  std::vector<double> sums(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    members[i] = {i};
    for (std::size_t j = i + 1; j < n; ++j) {
      sums[i * n + j] = sums[j * n + i] = unit.distance(i, j);
    }
  }

  auto linkage = [&](std::size_t a, std::size_t b) {
    return sums[a * n + b] /
           (static_cast<double>(members[a].size()) * static_cast<double>(members[b].size()));
  };

  for (std::size_t remaining = n; remaining > target_clusters; --remaining) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n; ++a) {
      if (!active[a]) continue;
      for (std::size_t b = a + 1; b < n; ++b) {
        if (active[b]) best = std::min(best, linkage(a, b));
      }
    }
    std::size_t merge_a = n;
    std::size_t merge_b = n;
    for (std::size_t a = 0; a < n && merge_a == n; ++a) {
      if (!active[a]) continue;
      for (std::size_t b = a + 1; b < n; ++b) {
        if (active[b] && linkage(a, b) <= best + kLinkageTieTolerance) {
          merge_a = a;
          merge_b = b;
          break;
        }
      }
    }

    for (std::size_t c = 0; c < n; ++c) {
      if (!active[c] || c == merge_a || c == merge_b) continue;
      sums[merge_a * n + c] += sums[merge_b * n + c];
      sums[c * n + merge_a] = sums[merge_a * n + c];
    }
    members[merge_a].insert(members[merge_a].end(), members[merge_b].begin(),
                            members[merge_b].end());
    members[merge_b].clear();
    active[merge_b] = false;
  }

  Clustering out;
  out.reserve(target_clusters);
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) continue;
    std::sort(members[i].begin(), members[i].end());
    out.push_back(std::move(members[i]));
  }
  return out;
}

std::vector<FeatureVector> aggregate_clusters(std::span<const FeatureVector> window,
                                              const Clustering& clusters) {
  const std::size_t dim = window.empty() ? 0 : window.front().dimension();
  require_dimension(window, dim, "aggregate: window vectors");
  std::vector<FeatureVector> out;
  out.reserve(clusters.size());
  std::vector<double> acc(dim);
  for (std::size_t r = 0; r < clusters.size(); ++r) {
    const auto& cluster = clusters[r];
    if (cluster.empty()) {
      throw_error(ErrorKind::kInvalidArgument, fmt::format("aggregate: cluster {} is empty", r));
    }
    std::fill(acc.begin(), acc.end(), 0.0);
    for (const auto member : cluster) {
      if (member >= window.size()) {
        throw_error(ErrorKind::kInvalidArgument,
                    fmt::format("aggregate: member {} outside window of {}", member,
                                window.size()));
      }
      for (std::size_t d = 0; d < dim; ++d) acc[d] += window[member].values[d];
    }
    FeatureVector mean = FeatureVector::zeros(dim);
    const auto count = static_cast<double>(cluster.size());
    for (std::size_t d = 0; d < dim; ++d) mean.values[d] = static_cast<float>(acc[d] / count);
    out.push_back(std::move(mean));
  }
  return out;
}

}  // namespace event_distill
