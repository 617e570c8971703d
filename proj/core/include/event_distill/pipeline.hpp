#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "event_distill/binning.hpp"
#include "event_distill/compress.hpp"
#include "event_distill/compression_config.hpp"
#include "event_distill/embedding.hpp"
#include "event_distill/event.hpp"

namespace event_distill {

enum class InputFormat { kEvbin, kCsv };
enum class OutputFormat { kCmp1, kJson };

InputFormat parse_input_format(std::string_view text);
OutputFormat parse_output_format(std::string_view text);

struct BaselineConfig {
  BaselineMode mode = BaselineMode::kInterval;
  std::size_t budget = 1;
  std::uint64_t seed = 0;
};

struct PipelineConfig {
  std::filesystem::path input;
  InputFormat input_format = InputFormat::kEvbin;
  std::optional<SensorGeometry> geometry;  // required for CSV
  std::uint64_t bin_width_us = kDefaultBinWidthUs;
  ProviderSpec provider{HashProviderParams{}};
  std::string query;
  CompressionConfig compression;
  std::optional<BaselineConfig> baseline;
  std::optional<std::filesystem::path> output;
  OutputFormat output_format = OutputFormat::kCmp1;
  std::size_t threads = 1;
  // Writes selector.emb / cluster.emb of all bins here when set.
  std::optional<std::filesystem::path> dump_features;

  void validate() const;
};

struct WindowReport {
  std::size_t window = 0;
  std::size_t size = 0;
  std::optional<double> diversity;
  std::size_t cluster_count = 0;
  std::size_t empty_bins = 0;  // member bins with zero events
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct RunReport {
  std::uint64_t input_events = 0;
  std::uint64_t span_us = 0;
  std::size_t bin_count = 0;
  std::size_t kept_count = 0;
  bool used_fallback = false;
  std::size_t order_violations = 0;
  std::vector<WindowReport> windows;
  std::size_t output_tokens = 0;
  double compression_ratio = 0.0;
  std::vector<StageTiming> stages;
  double total_seconds = 0.0;

  double stage_seconds_sum() const noexcept;
};

std::string to_json(const RunReport& report, int indent = 2);
std::string to_table(const RunReport& report);

struct PipelineResult {
  CompressedSequence sequence;
  RunReport report;
};

/// Collected per-bin state after the bin + embed stages.
struct BinnedFeatures {
  std::vector<FeatureVector> selector;
  std::vector<FeatureVector> cluster;
  std::vector<TimeRange> ranges;
  std::vector<std::uint64_t> event_counts;
  std::uint64_t events = 0;
  std::uint64_t min_t = 0;
  std::uint64_t max_t = 0;
  std::size_t order_violations = 0;
};

/// Streams an EVS1 file through the binner and provider; resident memory is
/// bounded by one binner batch plus per-bin vectors. Falls back to a full
/// in-memory load (with stable-sort repair) if the file is out of order.
BinnedFeatures bin_and_embed_file(const std::filesystem::path& path,
                                  std::uint64_t bin_width,
                                  const EmbeddingProvider& provider, std::size_t threads = 1,
                                  std::vector<StageTiming>* stages = nullptr);

BinnedFeatures bin_and_embed(const EventStream& stream, std::uint64_t bin_width,
                             const EmbeddingProvider& provider, std::size_t threads = 1,
                             std::vector<StageTiming>* stages = nullptr);

/// Filter + compress (or baseline) over already embedded bins.
PipelineResult compress_features(const BinnedFeatures& features,
                                 const FeatureVector& query,
                                 const PipelineConfig& config);

/// parse -> bin -> embed -> filter -> compress, then writes the output
/// artifact if configured. Errors carry the failing stage name.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace event_distill
