#include "event_distill/compress.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "event_distill/error.hpp"
#include "event_distill/parallel.hpp"

namespace event_distill {

RemainderPolicy parse_remainder_policy(std::string_view text) {
  if (text == "shrink" || text == "shrunk-window") return RemainderPolicy::kShrunkWindow;
  if (text == "passthrough") return RemainderPolicy::kPassthrough;
  throw_error(ErrorKind::kConfig,
              fmt::format("unknown remainder policy '{}' (expected shrink or passthrough)", text));
}

const char* to_string(RemainderPolicy policy) noexcept {
  return policy == RemainderPolicy::kShrunkWindow ? "shrink" : "passthrough";
}

void CompressionConfig::validate() const {
  if (!(tau >= -1.0 && tau <= 1.0)) {
    throw_error(ErrorKind::kConfig, fmt::format("tau {} outside [-1, 1]", tau));
  }
  if (window_size < 1) throw_error(ErrorKind::kConfig, "window size J must be >= 1");
}

WindowPartition partition_windows(std::size_t k, std::size_t window_size,
                                  RemainderPolicy policy) {
  if (window_size < 1) throw_error(ErrorKind::kInvalidArgument, "window size J must be >= 1");
  WindowPartition out;
  out.full_windows = k / window_size;
  for (std::size_t m = 0; m < out.full_windows; ++m) {
    out.windows.push_back(Window{m * window_size, window_size, false});
  }
  const std::size_t remainder = k % window_size;
  if (remainder > 0) {
    out.windows.push_back(Window{out.full_windows * window_size, remainder,
                                 policy == RemainderPolicy::kPassthrough});
  }
  return out;
}

WindowClustering cluster_window(std::span<const FeatureVector> vectors, const Window& window) {
  WindowClustering out;
  out.window = window;
  if (window.passthrough) {
    out.cluster_count = window.size;
    for (std::size_t i = 0; i < window.size; ++i) out.clusters.push_back({i});
    return out;
  }
  const double diversity = window_diversity(vectors);
  out.diversity = diversity;
  out.cluster_count = cluster_count(diversity, window.size);
  out.clusters = hac_average_linkage(vectors, out.cluster_count);
  return out;
}

CompressedSequence compress_sequence(const FilteredSequence& filtered,
                                     const CompressionConfig& config, std::size_t threads) {
  config.validate();
  const std::size_t k = filtered.size();
  if (k == 0) throw_error(ErrorKind::kInvalidArgument, "compress: filtered sequence is empty");
  if (filtered.features.size() != k || filtered.ranges.size() != k) {
    throw_error(ErrorKind::kInvalidArgument, "compress: filtered sequence fields not aligned");
  }
  const std::size_t dim = filtered.features.front().dimension();
  require_dimension(filtered.features, dim, "compress: cluster features");

  const auto partition = partition_windows(k, config.window_size, config.remainder);
  const auto& windows = partition.windows;
  const std::span<const FeatureVector> features(filtered.features);

  std::vector<WindowClustering> clustered(windows.size());
  std::vector<std::vector<Token>> window_tokens(windows.size());
  parallel_for(windows.size(), threads, [&](std::size_t m) {
    const auto& w = windows[m];
    const auto slice = features.subspan(w.begin, w.size);
    clustered[m] = cluster_window(slice, w);
    const auto means = aggregate_clusters(slice, clustered[m].clusters);

    auto& tokens = window_tokens[m];
    tokens.reserve(means.size());
    for (std::size_t r = 0; r < means.size(); ++r) {
      Token token;
      token.window = static_cast<std::uint32_t>(m);
      token.cluster = static_cast<std::uint32_t>(r);
      token.range = {std::numeric_limits<std::uint64_t>::max(), 0};
      for (const auto pos : clustered[m].clusters[r]) {
        const auto at = w.begin + pos;
        token.bins.push_back(static_cast<std::uint32_t>(filtered.kept_indices[at]));
        token.range.start = std::min(token.range.start, filtered.ranges[at].start);
        token.range.end = std::max(token.range.end, filtered.ranges[at].end);
      }
      token.vector = means[r];
      tokens.push_back(std::move(token));
    }
  });

  CompressedSequence out;
  out.dimension = dim;
  for (auto& tokens : window_tokens) {
    for (auto& t : tokens) out.tokens.push_back(std::move(t));
  }
  out.windows = std::move(clustered);
  return out;
}

}  // namespace event_distill
