#include "event_distill/filter.hpp"

#include <fmt/format.h>

#include "event_distill/error.hpp"
#include "event_distill/similarity.hpp"

namespace event_distill {

FilteredSequence cross_modal_filter(std::span<const FeatureVector> selector,
                                    std::span<const FeatureVector> cluster,
                                    const FeatureVector& query,
                                    const CompressionConfig& config,
                                    std::span<const TimeRange> ranges) {
  config.validate();
  if (selector.empty()) throw_error(ErrorKind::kInvalidArgument, "filter: no bins");
  if (selector.size() != cluster.size()) {
    throw_error(ErrorKind::kInvalidArgument,
                fmt::format("filter: {} selector vectors but {} cluster vectors",
                            selector.size(), cluster.size()));
  }
  if (!ranges.empty() && ranges.size() != selector.size()) {
    throw_error(ErrorKind::kInvalidArgument, "filter: time ranges not aligned with bins");
  }
  require_dimension(selector, query.dimension(), "filter: selector features vs query");

  std::vector<double> sims(selector.size());
  for (std::size_t t = 0; t < selector.size(); ++t) {
    sims[t] = cosine_similarity(selector[t], query);
  }

  FilteredSequence out;
  auto keep = [&](std::size_t t) {
    out.kept_indices.push_back(t);
    out.features.push_back(cluster[t]);
    out.selector_sims.push_back(sims[t]);
    out.ranges.push_back(ranges.empty() ? TimeRange{} : ranges[t]);
  };
  for (std::size_t t = 0; t < sims.size(); ++t) {
    if (sims[t] >= config.tau) keep(t);
  }
  if (out.kept_indices.empty() && config.fallback_top1) {
    std::size_t best = 0;
    for (std::size_t t = 1; t < sims.size(); ++t) {
      if (sims[t] > sims[best]) best = t;
    }
    keep(best);
    out.used_fallback = true;
  }
  return out;
}

}  // namespace event_distill
