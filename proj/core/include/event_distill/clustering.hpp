#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "event_distill/feature.hpp"

namespace event_distill {

/// Linkages closer than this to the current minimum count as tied.
inline constexpr double kLinkageTieTolerance = 1e-12;

/// Mean pairwise cosine distance of the l2-normalized window, in [0, 2].
/// A window of one vector has diversity 0.
double window_diversity(std::span<const FeatureVector> window);

/// max(1, min(J, round(diversity / 2 * J))), rounding half away from zero.
/// Throws kInvalidArgument unless 0 <= diversity <= 2 and window_size >= 1.
std::size_t cluster_count(double diversity, std::size_t window_size);

/// Member positions (into the input) of each cluster, ascending within a
/// cluster; clusters are ordered by their smallest member.
using Clustering = std::vector<std::vector<std::size_t>>;

/// Bottom-up average-linkage (UPGMA) clustering on cosine distance down to
/// exactly `target_clusters` clusters. Each step merges the pair with the
/// smallest mean cross-pair distance; ties go to the lexicographically
/// smallest (min member, min member) pair.
Clustering hac_average_linkage(std::span<const FeatureVector> vectors,
                               std::size_t target_clusters);

/// Coordinate-wise mean of the raw member vectors for each cluster, in the
/// order given.
std::vector<FeatureVector> aggregate_clusters(std::span<const FeatureVector> window,
                                              const Clustering& clusters);

}  // namespace event_distill
