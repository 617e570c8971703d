#include "event_distill/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "event_distill/cmp_format.hpp"
#include "event_distill/csv.hpp"
#include "event_distill/emb_file.hpp"
#include "event_distill/error.hpp"
#include "event_distill/evbin.hpp"
#include "event_distill/filter.hpp"
#include "event_distill/parallel.hpp"

namespace event_distill {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void add_stage(std::vector<StageTiming>* stages, const std::string& name, double seconds) {
  if (stages == nullptr) return;
  for (auto& s : *stages) {
    if (s.stage == name) {
      s.seconds += seconds;
      return;
    }
  }
  stages->push_back({name, seconds});
}

// Runs fn, rewrapping library errors with the stage name.
template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw with_context(e, stage);
  }
}

constexpr std::size_t kReadChunkEvents = 1 << 16;

class EmbeddingSink {
 public:
  EmbeddingSink(const EmbeddingProvider& provider, std::size_t threads, BinnedFeatures& out)
      : provider_(provider), threads_(threads), out_(out) {}

  void operator()(std::span<const Bin> bins) {
    const auto start = Clock::now();
    const std::size_t parts = std::min(threads_, bins.size());
    std::vector<BinEmbeddings> results(parts);
    parallel_for(parts, threads_, [&](std::size_t p) {
      const auto begin = bins.size() * p / parts;
      const auto end = bins.size() * (p + 1) / parts;
      results[p] = provider_.embed_bins(bins.subspan(begin, end - begin));
    });
    for (auto& r : results) {
      for (auto& v : r.selector) out_.selector.push_back(std::move(v));
      for (auto& v : r.cluster) out_.cluster.push_back(std::move(v));
    }
    for (const auto& bin : bins) {
      out_.ranges.push_back(bin.range());
      out_.event_counts.push_back(bin.events.size());
    }
    seconds_ += seconds_since(start);
  }

  double seconds() const noexcept { return seconds_; }

 private:
  const EmbeddingProvider& provider_;
  std::size_t threads_;
  BinnedFeatures& out_;
  double seconds_ = 0.0;
};

void check_dimensions(const BinnedFeatures& f, const EmbeddingProvider& provider) {
  require_dimension(f.selector, provider.selector_dimension(), "selector features");
  require_dimension(f.cluster, provider.cluster_dimension(), "cluster features");
}

}  // namespace

InputFormat parse_input_format(std::string_view text) {
  if (text == "evbin" || text == "evs1") return InputFormat::kEvbin;
  if (text == "csv") return InputFormat::kCsv;
  throw_error(ErrorKind::kConfig, fmt::format("unknown input format '{}'", text));
}

OutputFormat parse_output_format(std::string_view text) {
  if (text == "cmp1") return OutputFormat::kCmp1;
  if (text == "json") return OutputFormat::kJson;
  throw_error(ErrorKind::kConfig, fmt::format("unknown output format '{}'", text));
}

void PipelineConfig::validate() const {
  if (threads < 1) throw_error(ErrorKind::kConfig, "thread count must be >= 1");
  if (bin_width_us < 1) throw_error(ErrorKind::kConfig, "bin width must be >= 1 us");
  if (input_format == InputFormat::kCsv && !geometry) {
    throw_error(ErrorKind::kConfig, "CSV input needs --width and --height");
  }
  if (geometry && (geometry->width < 1 || geometry->height < 1)) {
    throw_error(ErrorKind::kConfig, "sensor width and height must be >= 1");
  }
  if (query.empty()) throw_error(ErrorKind::kConfig, "query text is empty");
  if (baseline && baseline->budget < 1) throw_error(ErrorKind::kConfig, "budget must be >= 1");
  compression.validate();
}

double RunReport::stage_seconds_sum() const noexcept {
  double sum = 0.0;
  for (const auto& s : stages) sum += s.seconds;
  return sum;
}

BinnedFeatures bin_and_embed(const EventStream& stream, std::uint64_t bin_width,
                             const EmbeddingProvider& provider, std::size_t threads,
                             std::vector<StageTiming>* stages) {
  if (stream.empty()) throw_error(ErrorKind::kParse, "input stream has no events");
  auto start = Clock::now();
  const auto bins = bin_stream(stream, bin_width);
  add_stage(stages, "bin", seconds_since(start));

  BinnedFeatures out;
  out.events = stream.size();
  out.min_t = stream.min_t();
  out.max_t = stream.max_t();
  out.order_violations = stream.metadata().order_violations;
  EmbeddingSink sink(provider, threads, out);
  sink(bins);
  provider.check_bin_count(bins.size());
  check_dimensions(out, provider);
  add_stage(stages, "embed", sink.seconds());
  return out;
}

BinnedFeatures bin_and_embed_file(const std::filesystem::path& path, std::uint64_t bin_width,
                                  const EmbeddingProvider& provider, std::size_t threads,
                                  std::vector<StageTiming>* stages) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorKind::kIo, fmt::format("cannot open {}", path.string()));

  auto start = Clock::now();
  EvbinReader reader(in);
  double parse_s = seconds_since(start);
  double bin_s = 0.0;

  BinnedFeatures out;
  EmbeddingSink sink(provider, threads, out);
  StreamingBinner binner(bin_width, std::ref(sink));

  std::vector<Event> chunk;
  chunk.reserve(kReadChunkEvents);
  bool unsorted = false;
  std::uint64_t last_t = 0;
  for (;;) {
    start = Clock::now();
    chunk.clear();
    const auto n = reader.read(chunk, kReadChunkEvents);
    for (std::size_t i = 0; i < n && !unsorted; ++i) {
      unsorted = (reader.records_read() > n || i > 0) && chunk[i].t < last_t;
      last_t = chunk[i].t;
    }
    parse_s += seconds_since(start);
    if (n == 0 || unsorted) break;

    start = Clock::now();
    const auto embed_before = sink.seconds();
    binner.push(chunk);
    bin_s += seconds_since(start) - (sink.seconds() - embed_before);
  }

  if (unsorted) {
    spdlog::warn("{}: timestamps out of order, loading whole file to repair", path.string());
    in.close();
    start = Clock::now();
    std::ifstream again(path, std::ios::binary);
    auto stream = parse_evbin(again);
    add_stage(stages, "parse", parse_s + seconds_since(start));
    spdlog::warn("{}: repaired {} order violations by stable sort", path.string(),
                 stream.metadata().order_violations);
    return bin_and_embed(stream, bin_width, provider, threads, stages);
  }

  if (reader.records_read() == 0) throw_error(ErrorKind::kParse, "input stream has no events");
  start = Clock::now();
  const auto embed_before = sink.seconds();
  binner.finish();
  bin_s += seconds_since(start) - (sink.seconds() - embed_before);

  out.events = binner.events_seen();
  out.min_t = binner.min_t();
  out.max_t = binner.max_t();
  provider.check_bin_count(out.selector.size());
  check_dimensions(out, provider);

  add_stage(stages, "parse", parse_s);
  add_stage(stages, "bin", bin_s);
  add_stage(stages, "embed", sink.seconds());
  return out;
}

PipelineResult compress_features(const BinnedFeatures& features, const FeatureVector& query,
                                 const PipelineConfig& config) {
  PipelineResult result;
  auto& report = result.report;

  auto start = Clock::now();
  const auto filtered = in_stage("filter", [&] {
    return cross_modal_filter(features.selector, features.cluster, query, config.compression,
                              features.ranges);
  });
  report.stages.push_back({"filter", seconds_since(start)});

  start = Clock::now();
  result.sequence = in_stage("compress", [&] {
    if (config.baseline) {
      return sample_baseline(filtered, config.baseline->mode, config.baseline->budget,
                             config.baseline->seed)
          .sequence;
    }
    return compress_sequence(filtered, config.compression, config.threads);
  });
  report.stages.push_back({"compress", seconds_since(start)});

  report.input_events = features.events;
  report.span_us = features.max_t - features.min_t;
  report.bin_count = features.selector.size();
  report.kept_count = filtered.size();
  report.used_fallback = filtered.used_fallback;
  report.order_violations = features.order_violations;
  for (std::size_t m = 0; m < result.sequence.windows.size(); ++m) {
    const auto& w = result.sequence.windows[m];
    WindowReport wr{m, w.window.size, w.diversity, w.cluster_count, 0};
    for (std::size_t i = 0; i < w.window.size; ++i) {
      const auto bin = filtered.kept_indices[w.window.begin + i];
      if (features.event_counts[bin] == 0) ++wr.empty_bins;
    }
    spdlog::info("window {}: size={} D={} R={}", m, wr.size,
                 wr.diversity ? fmt::format("{:.6f}", *wr.diversity) : "n/a", wr.cluster_count);
    report.windows.push_back(wr);
  }
  report.output_tokens = result.sequence.size();
  report.compression_ratio =
      report.output_tokens == 0
          ? 0.0
          : static_cast<double>(report.bin_count) / static_cast<double>(report.output_tokens);
  return result;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  const auto total_start = Clock::now();
  in_stage("config", [&] { config.validate(); });

  std::vector<StageTiming> stages;
  auto start = Clock::now();
  const auto provider = in_stage("provider", [&] { return make_provider(config.provider); });
  stages.push_back({"setup", seconds_since(start)});

  const auto features = in_stage("ingest", [&] {
    if (config.input_format == InputFormat::kEvbin) {
      return bin_and_embed_file(config.input, config.bin_width_us, *provider, config.threads,
                                &stages);
    }
    start = Clock::now();
    std::ifstream in(config.input);
    if (!in) throw_error(ErrorKind::kIo, fmt::format("cannot open {}", config.input.string()));
    const auto stream = parse_csv(in, *config.geometry);
    add_stage(&stages, "parse", seconds_since(start));
    return bin_and_embed(stream, config.bin_width_us, *provider, config.threads, &stages);
  });

  start = Clock::now();
  const auto query = in_stage("embed-query", [&] {
    auto q = provider->embed_query(config.query);
    if (q.dimension() != provider->selector_dimension()) {
      throw_error(ErrorKind::kProvider,
                  fmt::format("query dimension {} != selector dimension {}", q.dimension(),
                              provider->selector_dimension()));
    }
    return q;
  });
  add_stage(&stages, "embed", seconds_since(start));

  if (config.dump_features) {
    start = Clock::now();
    in_stage("dump-features", [&] {
      std::filesystem::create_directories(*config.dump_features);
      write_emb1(EmbeddingTable{provider->selector_dimension(), features.selector},
                 *config.dump_features / "selector.emb");
      write_emb1(EmbeddingTable{provider->cluster_dimension(), features.cluster},
                 *config.dump_features / "cluster.emb");
    });
    add_stage(&stages, "write", seconds_since(start));
  }

  auto result = compress_features(features, query, config);
  for (auto& s : result.report.stages) stages.push_back(s);

  if (config.output) {
    start = Clock::now();
    in_stage("write", [&] {
      std::ofstream out(*config.output, std::ios::binary);
      if (!out) {
        throw_error(ErrorKind::kIo, fmt::format("cannot create {}", config.output->string()));
      }
      if (config.output_format == OutputFormat::kCmp1) {
        write_cmp1(result.sequence, out);
      } else {
        out << to_json(result.sequence) << '\n';
      }
      out.flush();
      if (!out) throw_error(ErrorKind::kIo, "output write failed");
    });
    add_stage(&stages, "write", seconds_since(start));
  }

  result.report.stages = std::move(stages);
  result.report.total_seconds = seconds_since(total_start);
  return result;
}

std::string to_json(const RunReport& report, int indent) {
  nlohmann::ordered_json doc;
  doc["input_events"] = report.input_events;
  doc["span_us"] = report.span_us;
  doc["bin_count"] = report.bin_count;
  doc["kept_count"] = report.kept_count;
  doc["used_fallback"] = report.used_fallback;
  doc["order_violations"] = report.order_violations;
  doc["output_tokens"] = report.output_tokens;
  doc["compression_ratio"] = report.compression_ratio;
  auto& windows = doc["windows"] = nlohmann::ordered_json::array();
  for (const auto& w : report.windows) {
    windows.push_back({{"window", w.window},
                       {"size", w.size},
                       {"diversity", w.diversity ? nlohmann::ordered_json(*w.diversity)
                                                 : nlohmann::ordered_json(nullptr)},
                       {"cluster_count", w.cluster_count},
                       {"empty_bins", w.empty_bins}});
  }
  auto& stages = doc["stages"] = nlohmann::ordered_json::object();
  for (const auto& s : report.stages) stages[s.stage] = s.seconds;
  doc["total_seconds"] = report.total_seconds;
  return doc.dump(indent);
}

std::string to_table(const RunReport& report) {
  std::ostringstream os;
  os << fmt::format("events          {}\n", report.input_events);
  os << fmt::format("span (us)       {}\n", report.span_us);
  os << fmt::format("bins (T)        {}\n", report.bin_count);
  os << fmt::format("kept (k)        {}{}\n", report.kept_count,
                    report.used_fallback ? "  (fallback)" : "");
  os << fmt::format("tokens          {}\n", report.output_tokens);
  os << fmt::format("ratio T/tokens  {:.3f}\n", report.compression_ratio);
  os << "\nwindow   size  empty  D_m        R_m\n";
  for (const auto& w : report.windows) {
    os << fmt::format("{:<8} {:<5} {:<6} {:<10} {}\n", w.window, w.size, w.empty_bins,
                      w.diversity ? fmt::format("{:.6f}", *w.diversity) : "-", w.cluster_count);
  }
  os << "\nstage            seconds\n";
  for (const auto& s : report.stages) os << fmt::format("{:<16} {:.6f}\n", s.stage, s.seconds);
  os << fmt::format("{:<16} {:.6f}\n", "total", report.total_seconds);
  return os.str();
}

}  // namespace event_distill
