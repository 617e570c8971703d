#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "event_distill/binning.hpp"
#include "event_distill/compression_config.hpp"
#include "event_distill/feature.hpp"

namespace event_distill {

/// Bins that survived query-guided selection, in temporal order.
struct FilteredSequence {
  std::vector<std::size_t> kept_indices;   // strictly ascending bin indices
  std::vector<FeatureVector> features;     // cluster-space vectors of kept bins
  std::vector<double> selector_sims;
  std::vector<TimeRange> ranges;           // time range of each kept bin
  bool used_fallback = false;

  std::size_t size() const noexcept { return kept_indices.size(); }
};

/// Keeps every bin whose selector vector has cosine similarity >= tau with
/// the query. With nothing kept and fallback_top1 set, keeps the single most
/// similar bin (lowest index on ties). `ranges`, when non-empty, gives each
/// bin's time range and must be aligned with the features.
FilteredSequence cross_modal_filter(std::span<const FeatureVector> selector,
                                    std::span<const FeatureVector> cluster,
                                    const FeatureVector& query,
                                    const CompressionConfig& config,
                                    std::span<const TimeRange> ranges = {});

}  // namespace event_distill
