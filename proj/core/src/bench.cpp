#include "event_distill/bench.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include <fmt/format.h>
#include <json.hpp>

#include "event_distill/error.hpp"
#include "event_distill/evbin.hpp"

namespace event_distill {
namespace {

std::uint64_t read_status_kb(const char* key) {
  std::ifstream status("/proc/self/status");
  std::string line;
  const std::string prefix = std::string(key) + ":";
  while (std::getline(status, line)) {
    if (line.rfind(prefix, 0) == 0) {
      std::istringstream is(line.substr(prefix.size()));
      std::uint64_t kb = 0;
      is >> kb;
      return kb * 1024;
    }
  }
  return 0;
}

}  // namespace

std::uint64_t current_rss_bytes() { return read_status_kb("VmRSS"); }
std::uint64_t peak_rss_bytes() { return read_status_kb("VmHWM"); }

bool reset_peak_rss() {
  std::ofstream clear("/proc/self/clear_refs");
  if (!clear) return false;
  clear << "5";
  clear.flush();
  return static_cast<bool>(clear);
}

SceneSpec bench_scene(std::uint64_t events, std::uint64_t span_us, SensorGeometry geometry) {
  if (events < 1) throw_error(ErrorKind::kConfig, "bench scale must be >= 1");
  if (span_us < 5) throw_error(ErrorKind::kConfig, "bench span must be >= 5 us");
  const auto active = span_us * 2 / 5;
  const auto blank = span_us - 2 * active;
  SceneSpec spec;
  spec.geometry = geometry;
  spec.segments.push_back({MotionPattern::kStaticNoise, active, 0, events / 2});
  spec.segments.push_back({MotionPattern::kBlank, blank, 0, std::nullopt});
  spec.segments.push_back({MotionPattern::kMovingEdge, active, 0, events - events / 2});
  return spec;
}

BenchReport run_bench(const BenchConfig& config) {
  using Clock = std::chrono::steady_clock;
  BenchReport report;
  report.rss_cap_bytes = config.rss_cap_bytes;

  const auto span = config.span_us.value_or(config.scale);
  const auto scene = bench_scene(config.scale, span);
  const auto path = config.work_dir / fmt::format("event_distill_bench_{}_{}.evs",
                                                  static_cast<long>(::getpid()), config.seed);

  auto start = Clock::now();
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_error(ErrorKind::kIo, fmt::format("cannot create {}", path.string()));
    SyntheticGenerator gen(scene, config.seed);
    EvbinWriter writer(out, gen.geometry());
    std::vector<Event> chunk;
    chunk.reserve(1 << 16);
    for (;;) {
      chunk.clear();
      if (gen.next(chunk, 1 << 16) == 0) break;
      writer.write(chunk);
    }
    out.flush();
    if (!out) throw_error(ErrorKind::kIo, "bench: writing the synthetic stream failed");
    report.file_bytes = writer.bytes_written();
  }
  const double generate_s = std::chrono::duration<double>(Clock::now() - start).count();

  PipelineConfig pc;
  pc.input = path;
  pc.input_format = InputFormat::kEvbin;
  pc.bin_width_us = config.bin_width_us;
  pc.provider = config.provider;
  pc.query = config.query;
  pc.compression = config.compression;
  pc.threads = config.threads;

  report.rss_before_bytes = current_rss_bytes();
  reset_peak_rss();
  PipelineResult result;
  try {
    result = run_pipeline(pc);
  } catch (...) {
    if (!config.keep_file) std::filesystem::remove(path);
    throw;
  }
  report.peak_rss_bytes = peak_rss_bytes();
  if (!config.keep_file) std::filesystem::remove(path);

  const auto& r = result.report;
  report.events = r.input_events;
  report.span_us = r.span_us;
  report.bins = r.bin_count;
  report.kept = r.kept_count;
  report.tokens = r.output_tokens;
  for (const auto& w : r.windows) {
    report.max_window_clusters = std::max(report.max_window_clusters, w.cluster_count);
  }
  report.stages.push_back({"generate", generate_s});
  for (const auto& s : r.stages) report.stages.push_back(s);
  report.total_seconds = generate_s + r.total_seconds;
  if (r.total_seconds > 0.0) {
    report.events_per_second = static_cast<double>(r.input_events) / r.total_seconds;
    report.bins_per_second = static_cast<double>(r.bin_count) / r.total_seconds;
  }
  report.within_rss_cap = report.peak_rss_bytes <= config.rss_cap_bytes;
  return report;
}

std::string to_json(const BenchReport& report, int indent) {
  nlohmann::ordered_json doc;
  doc["events"] = report.events;
  doc["span_us"] = report.span_us;
  doc["bins"] = report.bins;
  doc["kept"] = report.kept;
  doc["tokens"] = report.tokens;
  doc["max_window_clusters"] = report.max_window_clusters;
  auto& stages = doc["stages"] = nlohmann::ordered_json::object();
  for (const auto& s : report.stages) stages[s.stage] = s.seconds;
  doc["total_seconds"] = report.total_seconds;
  doc["events_per_second"] = report.events_per_second;
  doc["bins_per_second"] = report.bins_per_second;
  doc["file_bytes"] = report.file_bytes;
  doc["rss_before_bytes"] = report.rss_before_bytes;
  doc["peak_rss_bytes"] = report.peak_rss_bytes;
  doc["rss_cap_bytes"] = report.rss_cap_bytes;
  doc["within_rss_cap"] = report.within_rss_cap;
  return doc.dump(indent);
}

std::string to_table(const BenchReport& report) {
  std::ostringstream os;
  os << fmt::format("{:<20} {}\n", "events", report.events);
  os << fmt::format("{:<20} {}\n", "span (us)", report.span_us);
  os << fmt::format("{:<20} {}\n", "bins", report.bins);
  os << fmt::format("{:<20} {}\n", "kept", report.kept);
  os << fmt::format("{:<20} {}\n", "tokens", report.tokens);
  os << fmt::format("{:<20} {}\n", "max R_m", report.max_window_clusters);
  for (const auto& s : report.stages) {
    os << fmt::format("{:<20} {:.3f} s\n", "stage " + s.stage, s.seconds);
  }
  os << fmt::format("{:<20} {:.3f} s\n", "total", report.total_seconds);
  os << fmt::format("{:<20} {:.3e}\n", "events/s", report.events_per_second);
  os << fmt::format("{:<20} {:.3e}\n", "bins/s", report.bins_per_second);
  os << fmt::format("{:<20} {:.1f} MiB (cap {:.1f} MiB, {})\n", "peak RSS",
                    static_cast<double>(report.peak_rss_bytes) / (1 << 20),
                    static_cast<double>(report.rss_cap_bytes) / (1 << 20),
                    report.within_rss_cap ? "ok" : "EXCEEDED");
  return os.str();
}

}  // namespace event_distill
