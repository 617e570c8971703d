#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "event_distill/binning.hpp"
#include "event_distill/clustering.hpp"
#include "event_distill/compression_config.hpp"
#include "event_distill/feature.hpp"
#include "event_distill/filter.hpp"

namespace event_distill {

struct Window {
  std::size_t begin = 0;  // position in the kept sequence
  std::size_t size = 0;
  bool passthrough = false;

  bool operator==(const Window&) const = default;
};

struct WindowPartition {
  std::vector<Window> windows;
  std::size_t full_windows = 0;  // floor(k / J)
};

/// floor(k/J) windows of J, then the k mod J remainder as one shrunk window
/// or one passthrough window, per policy.
WindowPartition partition_windows(std::size_t k, std::size_t window_size,
                                  RemainderPolicy policy);

/// Clustering outcome for one window. Passthrough windows carry no
/// diversity and one singleton cluster per member.
struct WindowClustering {
  Window window;
  std::optional<double> diversity;
  std::size_t cluster_count = 0;
  Clustering clusters;  // positions relative to window.begin
};

struct Token {
  std::uint32_t window = 0;
  std::uint32_t cluster = 0;
  std::vector<std::uint32_t> bins;  // original bin indices, ascending
  TimeRange range;
  FeatureVector vector;

  bool operator==(const Token&) const = default;
};

struct CompressedSequence {
  std::size_t dimension = 0;
  std::vector<Token> tokens;
  // Per-window diagnostics; not part of the CMP1 serialization.
  std::vector<WindowClustering> windows;

  std::size_t size() const noexcept { return tokens.size(); }
};

/// Clusters one window of vectors: diversity, cluster count, HAC.
WindowClustering cluster_window(std::span<const FeatureVector> vectors,
                                const Window& window);

/// Partition, cluster and aggregate every window, then concatenate the
/// aggregates in temporal order. Windows are evaluated on up to `threads`
/// workers; the result does not depend on the thread count.
CompressedSequence compress_sequence(const FilteredSequence& filtered,
                                     const CompressionConfig& config,
                                     std::size_t threads = 1);

enum class BaselineMode { kRandom, kInterval };

BaselineMode parse_baseline_mode(std::string_view text);
const char* to_string(BaselineMode mode) noexcept;

struct BaselineResult {
  CompressedSequence sequence;
  bool budget_exceeded = false;  // budget > k; all k kept
};

/// Fixed-budget selection for comparison runs: seeded uniform sampling
/// without replacement, or evenly spaced picks. Every token is a singleton.
BaselineResult sample_baseline(const FilteredSequence& filtered, BaselineMode mode,
                               std::size_t budget, std::uint64_t seed = 0);

}  // namespace event_distill
