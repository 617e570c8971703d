#include <cstdio>
#include <fstream>
#include <iostream>
#include <new>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "event_distill/bench.hpp"
#include "event_distill/binning.hpp"
#include "event_distill/csv.hpp"
#include "event_distill/error.hpp"
#include "event_distill/evbin.hpp"
#include "event_distill/filter.hpp"
#include "event_distill/frame.hpp"
#include "event_distill/logging.hpp"
#include "event_distill/pipeline.hpp"
#include "event_distill/synthetic.hpp"

namespace ed = event_distill;

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kParseError = 3,
  kProviderError = 4,
  kIoError = 5,
};

int exit_code(ed::ErrorKind kind) {
  switch (kind) {
    case ed::ErrorKind::kConfig: return kConfigError;
    case ed::ErrorKind::kParse: return kParseError;
    case ed::ErrorKind::kProvider: return kProviderError;
    case ed::ErrorKind::kIo: return kIoError;
    case ed::ErrorKind::kInvalidArgument: return kFailure;
  }
  return kFailure;
}

struct InputOptions {
  std::string path;
  std::string format = "evbin";
  std::optional<std::uint16_t> width;
  std::optional<std::uint16_t> height;
  std::uint64_t bin_us = ed::kDefaultBinWidthUs;

  std::optional<ed::SensorGeometry> geometry() const {
    if (!width && !height) return std::nullopt;
    if (!width || !height) {
      ed::throw_error(ed::ErrorKind::kConfig, "--width and --height must be given together");
    }
    return ed::SensorGeometry{*width, *height};
  }
};

struct ModelOptions {
  std::string embedder = "hash:64:0";
  std::string query;
  double tau = ed::kDefaultTau;
  std::size_t window = ed::kDefaultWindowSize;
  std::string remainder = "shrink";
  std::size_t threads = 1;

  ed::CompressionConfig compression() const {
    ed::CompressionConfig c;
    c.tau = tau;
    c.window_size = window;
    c.remainder = ed::parse_remainder_policy(remainder);
    c.validate();
    return c;
  }
};

void add_input_options(CLI::App& cmd, InputOptions& in) {
  cmd.add_option("-i,--input", in.path, "Event file")->required();
  cmd.add_option("--format", in.format, "Input format")
      ->check(CLI::IsMember({"evbin", "evs1", "csv"}))
      ->capture_default_str();
  cmd.add_option("--width", in.width, "Sensor width (CSV input)");
  cmd.add_option("--height", in.height, "Sensor height (CSV input)");
  cmd.add_option("--bin-us", in.bin_us, "Bin width in microseconds")->capture_default_str();
}

void add_model_options(CLI::App& cmd, ModelOptions& m, bool with_compression) {
  cmd.add_option("--embedder", m.embedder, "hash:DIM:SEED | file:DIR | http:URL[;dim=D]")
      ->capture_default_str();
  cmd.add_option("-q,--query", m.query, "Query text")->required();
  cmd.add_option("--tau", m.tau, "Selection threshold")->capture_default_str();
  cmd.add_option("--threads", m.threads, "Worker threads")->capture_default_str();
  if (with_compression) {
    cmd.add_option("--window", m.window, "Window size J")->capture_default_str();
    cmd.add_option("--remainder", m.remainder, "Trailing partial window")
        ->check(CLI::IsMember({"shrink", "passthrough"}))
        ->capture_default_str();
  }
}

ed::EventStream load_stream(const InputOptions& in) {
  const auto format = ed::parse_input_format(in.format);
  if (format == ed::InputFormat::kCsv) {
    const auto geometry = in.geometry();
    if (!geometry) ed::throw_error(ed::ErrorKind::kConfig, "CSV input needs --width and --height");
    std::ifstream file(in.path);
    if (!file) ed::throw_error(ed::ErrorKind::kIo, fmt::format("cannot open {}", in.path));
    return ed::parse_csv(file, *geometry);
  }
  std::ifstream file(in.path, std::ios::binary);
  if (!file) ed::throw_error(ed::ErrorKind::kIo, fmt::format("cannot open {}", in.path));
  return ed::parse_evbin(file);
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) ed::throw_error(ed::ErrorKind::kIo, fmt::format("cannot create {}", path));
  return file;
}

void finish_output(std::ostream& out) {
  out.flush();
  if (!out) ed::throw_error(ed::ErrorKind::kIo, "output write failed");
}

int run_compress(const InputOptions& in, const ModelOptions& m, const std::string& output,
                 const std::string& output_format, const std::string& baseline,
                 std::size_t budget, std::uint64_t seed, const std::string& dump,
                 const std::string& report_format) {
  ed::PipelineConfig config;
  config.input = in.path;
  config.input_format = ed::parse_input_format(in.format);
  config.geometry = in.geometry();
  config.bin_width_us = in.bin_us;
  config.provider = ed::ProviderSpec::parse(m.embedder);
  config.query = m.query;
  config.compression = m.compression();
  if (!baseline.empty()) {
    config.baseline = ed::BaselineConfig{ed::parse_baseline_mode(baseline), budget, seed};
  }
  if (!output.empty()) config.output = output;
  config.output_format = ed::parse_output_format(output_format);
  config.threads = m.threads;
  if (!dump.empty()) config.dump_features = dump;

  const auto result = ed::run_pipeline(config);
  if (report_format == "json") {
    std::cout << ed::to_json(result.report) << '\n';
  } else if (report_format == "table") {
    std::cout << ed::to_table(result.report);
  }
  return kOk;
}

int run_bin(const InputOptions& in, const std::string& output) {
  const auto stream = load_stream(in);
  std::ofstream file;
  auto& out = open_output(output, file);
  out << "bin,t_start,t_end,events,positive,negative\n";
  for (const auto& bin : ed::bin_stream(stream, in.bin_us)) {
    std::size_t positive = 0;
    for (const auto& e : bin.events) positive += e.p > 0;
    out << fmt::format("{},{},{},{},{},{}\n", bin.index, bin.t_start, bin.t_end,
                       bin.events.size(), positive, bin.events.size() - positive);
  }
  finish_output(out);
  return kOk;
}

int run_render(const InputOptions& in, const std::string& output_dir,
               const std::string& image_format, std::int32_t max_count,
               std::optional<std::size_t> only_bin) {
  const auto stream = load_stream(in);
  const auto bins = ed::bin_stream(stream, in.bin_us);
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) ed::throw_error(ed::ErrorKind::kIo, fmt::format("cannot create {}", output_dir));
  if (only_bin && *only_bin >= bins.size()) {
    ed::throw_error(ed::ErrorKind::kConfig,
                    fmt::format("--bin {} out of range ({} bins)", *only_bin, bins.size()));
  }
  std::size_t written = 0;
  for (const auto& bin : bins) {
    if (only_bin && bin.index != *only_bin) continue;
    const auto frame = ed::render_frame(bin, stream.geometry());
    const auto path = std::filesystem::path(output_dir) /
                      fmt::format("frame_{:06}.{}", bin.index, image_format);
    if (image_format == "png") {
      ed::write_png(frame, path, max_count);
    } else {
      std::ofstream out(path, std::ios::binary);
      if (!out) ed::throw_error(ed::ErrorKind::kIo, fmt::format("cannot create {}", path.string()));
      ed::write_ppm(frame, out, max_count);
      finish_output(out);
    }
    ++written;
  }
  std::cout << fmt::format("wrote {} frames to {}\n", written, output_dir);
  return kOk;
}

int run_filter(const InputOptions& in, const ModelOptions& m, const std::string& output) {
  const auto provider = ed::make_provider(ed::ProviderSpec::parse(m.embedder));
  ed::BinnedFeatures features;
  if (ed::parse_input_format(in.format) == ed::InputFormat::kEvbin) {
    features = ed::bin_and_embed_file(in.path, in.bin_us, *provider, m.threads);
  } else {
    features = ed::bin_and_embed(load_stream(in), in.bin_us, *provider, m.threads);
  }
  const auto query = provider->embed_query(m.query);
  auto config = m.compression();
  const auto filtered =
      ed::cross_modal_filter(features.selector, features.cluster, query, config, features.ranges);
  if (filtered.used_fallback) {
    spdlog::warn("no bin reached tau = {}; kept the most similar bin", m.tau);
  }
  std::ofstream file;
  auto& out = open_output(output, file);
  out << "bin,t_start,t_end,similarity\n";
  for (std::size_t i = 0; i < filtered.size(); ++i) {
    out << fmt::format("{},{},{},{:.9f}\n", filtered.kept_indices[i], filtered.ranges[i].start,
                       filtered.ranges[i].end, filtered.selector_sims[i]);
  }
  finish_output(out);
  return kOk;
}

int run_gen(const std::string& scene, std::uint16_t width, std::uint16_t height,
            std::uint64_t seed, const std::string& output, const std::string& format) {
  const auto spec = ed::parse_scene(scene, {width, height});
  std::ofstream file(output, std::ios::binary);
  if (!file) ed::throw_error(ed::ErrorKind::kIo, fmt::format("cannot create {}", output));
  ed::SyntheticGenerator generator(spec, seed);
  if (ed::parse_input_format(format) == ed::InputFormat::kCsv) {
    ed::write_csv(ed::generate_synthetic(spec, seed), file);
  } else {
    ed::EvbinWriter writer(file, spec.geometry);
    std::vector<ed::Event> chunk;
    while (generator.next(chunk, 1 << 16) > 0) {
      writer.write(chunk);
      chunk.clear();
    }
  }
  finish_output(file);
  std::cout << fmt::format("wrote {} events ({} us) to {}\n", generator.total_events(),
                           generator.total_duration_us(), output);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  ed::init_logging_from_env();

  CLI::App app{"Query-guided compression of event-camera streams"};
  app.require_subcommand(1);

  InputOptions in;
  ModelOptions model;
  std::string output;
  std::string output_format = "cmp1";
  std::string baseline;
  std::size_t budget = 0;
  std::uint64_t seed = 0;
  std::string dump;
  std::string report_format = "table";

  auto* compress = app.add_subcommand("compress", "Run the full pipeline");
  add_input_options(*compress, in);
  add_model_options(*compress, model, true);
  compress->add_option("-o,--output", output, "Output file");
  compress->add_option("--output-format", output_format, "Output format")
      ->check(CLI::IsMember({"cmp1", "json"}))
      ->capture_default_str();
  auto* baseline_opt = compress->add_option("--baseline", baseline,
                                            "Replace clustering with fixed-budget sampling")
                           ->check(CLI::IsMember({"random", "interval"}));
  compress->add_option("--budget", budget, "Token budget for --baseline")->needs(baseline_opt);
  baseline_opt->needs(compress->get_option("--budget"));
  compress->add_option("--seed", seed, "Seed for --baseline random")->capture_default_str();
  compress->add_option("--dump-features", dump, "Write selector.emb/cluster.emb here");
  compress->add_option("--report", report_format, "Run report on stdout")
      ->check(CLI::IsMember({"table", "json", "none"}))
      ->capture_default_str();

  auto* bin = app.add_subcommand("bin", "Per-bin event statistics as CSV");
  add_input_options(*bin, in);
  bin->add_option("-o,--output", output, "Output file (default stdout)");

  std::string image_format = "png";
  std::int32_t max_count = ed::kDefaultMaxCount;
  std::optional<std::size_t> only_bin;
  auto* render = app.add_subcommand("render", "Render bins as polarity frames");
  add_input_options(*render, in);
  render->add_option("-o,--output", output, "Output directory")->required();
  render->add_option("--image-format", image_format, "Image format")
      ->check(CLI::IsMember({"png", "ppm"}))
      ->capture_default_str();
  render->add_option("--max-count", max_count, "Count that saturates a pixel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  render->add_option("--bin", only_bin, "Render only this bin");

  auto* filter = app.add_subcommand("filter", "Query-guided bin selection only");
  add_input_options(*filter, in);
  add_model_options(*filter, model, false);
  filter->add_option("-o,--output", output, "Output file (default stdout)");

  ed::BenchConfig bench_config;
  std::uint64_t span_us = 0;
  std::uint64_t rss_cap_mib = bench_config.rss_cap_bytes >> 20;
  std::string work_dir = bench_config.work_dir.string();
  auto* bench = app.add_subcommand("bench", "Generate a synthetic stream and time the pipeline");
  bench->add_option("--scale", bench_config.scale, "Event count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--span-us", span_us, "Timestamp span (default: scale)");
  bench->add_option("--seed", bench_config.seed, "Generator seed")->capture_default_str();
  bench->add_option("--bin-us", bench_config.bin_width_us, "Bin width")->capture_default_str();
  bench->add_option("--embedder", model.embedder, "Embedding provider")->capture_default_str();
  bench->add_option("-q,--query", bench_config.query, "Query text")->capture_default_str();
  bench->add_option("--tau", model.tau, "Selection threshold")->capture_default_str();
  bench->add_option("--window", model.window, "Window size J")->capture_default_str();
  bench->add_option("--threads", model.threads, "Worker threads")->capture_default_str();
  bench->add_option("--work-dir", work_dir, "Where the stream file is written")
      ->capture_default_str();
  bench->add_flag("--keep-file", bench_config.keep_file, "Keep the generated stream");
  bench->add_option("--rss-cap-mib", rss_cap_mib, "Peak RSS budget")->capture_default_str();
  bench->add_option("--report", report_format, "Report format")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();
  bench->add_option("-o,--output", output, "Also write the JSON report here");

  std::string scene =
      "static-noise:1000000:100000;blank:1000000;moving-edge:1000000:100000";
  std::uint16_t gen_width = 640;
  std::uint16_t gen_height = 480;
  std::string gen_format = "evbin";
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen", "Write a synthetic event stream");
  gen->add_option("--scene", scene, "PATTERN:DURATION_US[:RATE_HZ];...")->capture_default_str();
  gen->add_option("--width", gen_width, "Sensor width")->capture_default_str();
  gen->add_option("--height", gen_height, "Sensor height")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_option("--format", gen_format, "Output format")
      ->check(CLI::IsMember({"evbin", "evs1", "csv"}))
      ->capture_default_str();
  gen->add_option("-o,--output", output, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (compress->parsed()) {
      return run_compress(in, model, output, output_format, baseline, budget, seed, dump,
                          report_format);
    }
    if (bin->parsed()) return run_bin(in, output);
    if (render->parsed()) return run_render(in, output, image_format, max_count, only_bin);
    if (filter->parsed()) return run_filter(in, model, output);
    if (gen->parsed()) return run_gen(scene, gen_width, gen_height, gen_seed, output, gen_format);
    if (bench->parsed()) {
      if (span_us > 0) bench_config.span_us = span_us;
      bench_config.provider = ed::ProviderSpec::parse(model.embedder);
      bench_config.compression = model.compression();
      bench_config.threads = model.threads;
      bench_config.work_dir = work_dir;
      bench_config.rss_cap_bytes = rss_cap_mib << 20;
      const auto report = ed::run_bench(bench_config);
      std::cout << (report_format == "json" ? ed::to_json(report) + "\n" : ed::to_table(report));
      if (!output.empty()) {
        std::ofstream file(output);
        file << ed::to_json(report) << '\n';
        finish_output(file);
      }
      return report.within_rss_cap ? kOk : kFailure;
    }
  } catch (const ed::Error& e) {
    std::cerr << "event-distill: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::bad_alloc&) {
    std::cerr << "event-distill: out of memory\n";
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "event-distill: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
