#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "event_distill/pipeline.hpp"
#include "event_distill/synthetic.hpp"

namespace event_distill {

struct BenchConfig {
  std::uint64_t scale = 1'000'000;  // events
  // Timestamp span of the generated stream; defaults to `scale` us.
  std::optional<std::uint64_t> span_us;
  std::uint64_t seed = 1;
  std::uint64_t bin_width_us = kDefaultBinWidthUs;
  ProviderSpec provider{HashProviderParams{}};
  std::string query = "a car drives past";
  CompressionConfig compression;
  std::size_t threads = 1;
  std::filesystem::path work_dir = std::filesystem::temp_directory_path();
  bool keep_file = false;
  std::uint64_t rss_cap_bytes = std::uint64_t{1} << 30;
};

struct BenchReport {
  std::uint64_t events = 0;
  std::uint64_t span_us = 0;
  std::size_t bins = 0;
  std::size_t kept = 0;
  std::size_t tokens = 0;
  std::size_t max_window_clusters = 0;
  std::vector<StageTiming> stages;
  double total_seconds = 0.0;
  double events_per_second = 0.0;
  double bins_per_second = 0.0;
  std::uint64_t file_bytes = 0;
  std::uint64_t rss_before_bytes = 0;
  std::uint64_t peak_rss_bytes = 0;  // high-water mark during parse/bin/embed
  std::uint64_t rss_cap_bytes = 0;
  bool within_rss_cap = false;
};

/// Three-segment scene (static noise, blank, moving edge) with exactly
/// `events` events over `span_us`.
SceneSpec bench_scene(std::uint64_t events, std::uint64_t span_us,
                      SensorGeometry geometry = {640, 480});

/// Generates a synthetic EVS1 file of the configured scale, then runs the
/// file-backed pipeline over it, timing every stage.
BenchReport run_bench(const BenchConfig& config);

std::string to_json(const BenchReport& report, int indent = 2);
std::string to_table(const BenchReport& report);

/// Current and peak resident set size from /proc/self/status; 0 if
/// unavailable.
std::uint64_t current_rss_bytes();
std::uint64_t peak_rss_bytes();
/// Resets the kernel's peak-RSS counter when supported; returns success.
bool reset_peak_rss();

}  // namespace event_distill
