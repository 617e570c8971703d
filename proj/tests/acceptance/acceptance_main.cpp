// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. `--scale N` shrinks the large-stream criterion for quick runs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <png.h>

#include "event_distill/bench.hpp"
#include "event_distill/binning.hpp"
#include "event_distill/clustering.hpp"
#include "event_distill/cmp_format.hpp"
#include "event_distill/compress.hpp"
#include "event_distill/emb_file.hpp"
#include "event_distill/error.hpp"
#include "event_distill/evbin.hpp"
#include "event_distill/filter.hpp"
#include "event_distill/frame.hpp"
#include "event_distill/pipeline.hpp"
#include "event_distill/similarity.hpp"
#include "event_distill/synthetic.hpp"
#include "generators.hpp"
#include "naive_hac.hpp"

using namespace event_distill;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Records the first failed check; later checks still run.
class Checker {
 public:
  void expect(bool condition, const std::string& what) {
    if (!condition && outcome_.ok) {
      outcome_.ok = false;
      outcome_.detail = what;
    }
  }
  void note(std::string text) {
    if (outcome_.ok) outcome_.detail = std::move(text);
  }
  Outcome result() const { return outcome_; }

 private:
  Outcome outcome_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / fmt::format("event_distill_acceptance_{}", ::getpid());
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

CompressionConfig compression(double tau, std::size_t window) {
  CompressionConfig c;
  c.tau = tau;
  c.window_size = window;
  return c;
}

FeatureVector negated(FeatureVector v) {
  for (auto& x : v.values) x = -x;
  return v;
}

Outcome analytic_diversity() {
  Checker c;
  const double tol = 1e-6;
  const FeatureVector v{0.3f, -1.2f, 2.0f, 0.5f};
  const std::vector<FeatureVector> identical(4, v);
  c.expect(std::abs(window_diversity(identical)) <= tol, "identical window D != 0");
  c.expect(cluster_count(window_diversity(identical), 4) == 1, "identical window R != 1");

  const std::vector<FeatureVector> antipodal{v, negated(v)};
  const double d2 = window_diversity(antipodal);
  c.expect(std::abs(d2 - 2.0) <= tol, fmt::format("antipodal D = {}", d2));
  c.expect(cluster_count(d2, 2) == 2, "antipodal R != J");
  c.expect(cluster_count(2.0, 8) == 8, "D = 2 at J = 8 does not give R = 8");

  const std::vector<FeatureVector> orthogonal{{1, 0, 0}, {0, 1, 0}};
  const double d1 = window_diversity(orthogonal);
  c.expect(std::abs(d1 - 1.0) <= tol, fmt::format("orthogonal D = {}", d1));

  std::vector<FeatureVector> halves(4, v);
  halves.insert(halves.end(), 4, negated(v));
  const double d = window_diversity(halves);
  c.expect(std::abs(d - 8.0 / 7.0) <= tol, fmt::format("4v/4(-v) D = {}", d));
  c.expect(cluster_count(d, 8) == 5, fmt::format("4v/4(-v) R = {}", cluster_count(d, 8)));
  c.note(fmt::format("D = 0, 2, 1, {:.9f}; R = 1, 2, -, 5", d));
  return c.result();
}

Outcome hac_equivalence() {
  Checker c;
  std::mt19937_64 rng(20240601);
  std::size_t instances = 0;
  std::size_t partitions = 0;
  for (; instances < 10'000; ++instances) {
    const std::size_t n = 1 + rng() % 8;
    const std::size_t dim = 1 + rng() % 6;
    std::vector<FeatureVector> x;
    if (instances % 2 == 0) {
      x = testing::palette_vectors(rng, n, dim);
    } else {
      for (std::size_t i = 0; i < n; ++i) x.push_back(testing::random_vector(rng, dim));
    }
    for (std::size_t k = 1; k <= n; ++k) {
      ++partitions;
      if (hac_average_linkage(x, k) != testing::naive_hac(x, k)) {
        c.expect(false, fmt::format("instance {} (n={}, K={}) differs", instances, n, k));
      }
    }
  }
  c.note(fmt::format("{} instances, {} partitions identical", instances, partitions));
  return c.result();
}

Outcome filter_soundness() {
  Checker c;
  std::mt19937_64 rng(20240602);
  std::size_t fallbacks = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 64;
    const std::size_t dim = 1 + rng() % 16;
    std::vector<FeatureVector> sel;
    std::vector<FeatureVector> clu;
    for (std::size_t i = 0; i < n; ++i) {
      sel.push_back(testing::random_vector(rng, dim));
      clu.push_back(testing::random_vector(rng, 3));
    }
    const auto q = testing::random_vector(rng, dim);
    const double tau = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    const auto f = cross_modal_filter(sel, clu, q, compression(tau, 8));
    std::vector<std::size_t> expected;
    for (std::size_t i = 0; i < n; ++i) {
      if (cosine_similarity(sel[i], q) >= tau) expected.push_back(i);
    }
    if (expected.empty()) {
      ++fallbacks;
      continue;
    }
    c.expect(!f.used_fallback && f.kept_indices == expected,
             fmt::format("trial {}: kept set differs", trial));
    for (std::size_t j = 0; j < f.size(); ++j) {
      c.expect(f.features[j] == clu[f.kept_indices[j]], "cluster features not carried");
    }
  }

  const std::vector<FeatureVector> below{{0, 1}, {-1, 0.5f}, {0.2f, 1}, {0.2f, 1}, {-1, 0}};
  const auto f = cross_modal_filter(below, below, FeatureVector{1, 0}, compression(0.9, 8));
  c.expect(f.used_fallback, "all-below case did not use the fallback");
  c.expect(f.kept_indices == std::vector<std::size_t>{2}, "fallback did not keep the argmax");
  c.note(fmt::format("1000 triples ({} all-below), fallback keeps bin 2", fallbacks));
  return c.result();
}

fs::path write_scene(const fs::path& path, const std::string& scene, std::uint64_t seed) {
  std::ofstream out(path, std::ios::binary);
  write_evbin(generate_synthetic(parse_scene(scene, {640, 480}), seed), out);
  return path;
}

Outcome end_to_end(const fs::path& dir) {
  Checker c;
  const auto input = write_scene(dir / "nbn.evs",
                                 "noise:2000000:20000;blank:3000000;noise:2000000:20000", 7);
  PipelineConfig config;
  config.input = input;
  config.query = "a car drives past";
  config.compression = compression(-1.0, 8);
  config.output = dir / "run1.cmp";
  const auto first = run_pipeline(config);
  config.output = dir / "run2.cmp";
  config.threads = 4;
  run_pipeline(config);

  const auto& r = first.report;
  c.expect(r.output_tokens < r.bin_count,
           fmt::format("{} tokens for {} bins", r.output_tokens, r.bin_count));
  std::size_t blank = 0;
  for (const auto& w : r.windows) {
    if (w.size > 0 && w.empty_bins == w.size) {
      ++blank;
      c.expect(w.cluster_count == 1,
               fmt::format("blank window {} has R = {}", w.window, w.cluster_count));
    }
  }
  c.expect(blank > 0, "no window lies wholly inside the blank segment");
  const auto a = read_file(dir / "run1.cmp");
  c.expect(!a.empty() && a == read_file(dir / "run2.cmp"), "CMP1 output differs between runs");
  c.note(fmt::format("{} bins -> {} tokens, {} blank windows all R = 1, CMP1 identical",
                     r.bin_count, r.output_tokens, blank));
  return c.result();
}

Outcome identity(const fs::path& dir) {
  Checker c;
  PipelineConfig config;
  config.input = write_scene(dir / "id.evs", "noise:1500000:8000;edge:1500000:8000", 11);
  config.query = "a car drives past";
  config.compression = compression(-1.0, 1);
  config.dump_features = dir / "id_features";
  const auto result = run_pipeline(config);
  const auto cluster = read_emb1(dir / "id_features" / "cluster.emb");
  c.expect(result.sequence.size() == result.report.bin_count &&
               cluster.rows.size() == result.report.bin_count,
           "token count != bin count");
  double worst = 0;
  for (std::size_t i = 0; i < std::min(cluster.rows.size(), result.sequence.size()); ++i) {
    const auto& a = result.sequence.tokens[i].vector.values;
    const auto& b = cluster.rows[i].values;
    c.expect(a.size() == b.size(), "dimension mismatch");
    for (std::size_t d = 0; d < std::min(a.size(), b.size()); ++d) {
      worst = std::max(worst, double(std::abs(a[d] - b[d])));
    }
  }
  c.expect(worst <= 1e-6, fmt::format("max coordinate error {}", worst));
  c.note(fmt::format("{} tokens = T, max coordinate error {}", result.sequence.size(), worst));
  return c.result();
}

Outcome round_trips() {
  Checker c;
  std::mt19937_64 rng(20240606);
  for (int i = 0; i < 100; ++i) {
    const auto stream = testing::random_stream(rng, 500);
    std::ostringstream first;
    write_evbin(stream, first);
    std::istringstream in(first.str());
    const auto back = parse_evbin(in);
    std::ostringstream second;
    write_evbin(back, second);
    c.expect(first.str() == second.str(), fmt::format("EVS1 stream {} differs", i));
  }
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + rng() % 64;
    auto x = testing::palette_vectors(rng, n, 1 + rng() % 8);
    for (auto& v : x) {
      if (rng() & 1) v = testing::random_vector(rng, v.dimension());
    }
    std::vector<TimeRange> ranges;
    for (std::size_t t = 0; t < n; ++t) ranges.push_back({t * 1000, t * 1000 + 1000});
    const auto f = cross_modal_filter(x, x, x.front(), compression(-1.0, 8), ranges);
    const auto seq = compress_sequence(f, compression(-1.0, 1 + rng() % 10));
    std::ostringstream first;
    write_cmp1(seq, first);
    std::istringstream in(first.str());
    const auto back = parse_cmp1(in);
    std::ostringstream second;
    write_cmp1(back, second);
    c.expect(first.str() == second.str(), fmt::format("CMP1 sequence {} differs", i));
  }
  c.note("100 EVS1 streams and 100 CMP1 sequences byte-identical");
  return c.result();
}

Outcome scale_budget(std::uint64_t scale, const fs::path& dir) {
  Checker c;
  constexpr std::uint64_t kPeakBudget = std::uint64_t{256} << 20;
  BenchConfig config;
  config.scale = scale;
  config.compression = compression(-1.0, 8);
  config.work_dir = dir;
  config.rss_cap_bytes = kPeakBudget;
  const auto dense = run_bench(config);
  c.expect(dense.total_seconds < 600.0, fmt::format("took {:.1f} s", dense.total_seconds));
  c.expect(dense.peak_rss_bytes > 0, "peak RSS unavailable");
  c.expect(dense.within_rss_cap, fmt::format("peak RSS {:.1f} MiB over {} MiB",
                                             dense.peak_rss_bytes / 1048576.0,
                                             kPeakBudget >> 20));
  c.expect(dense.events == scale, "event count mismatch");

  config.scale = std::max<std::uint64_t>(scale / 10, 1000);
  config.span_us = scale * 10;
  const auto sparse = run_bench(config);
  c.expect(sparse.span_us + 1 >= scale * 10 * 9 / 10, "sparse stream span too short");
  c.expect(sparse.within_rss_cap, "sparse stream over the RSS budget");

  const double raw_mib = double(scale) * sizeof(Event) / 1048576.0;
  c.note(fmt::format(
      "{} events in {:.1f} s ({:.2e} ev/s), peak RSS {:.1f} MiB vs {:.0f} MiB of raw events; "
      "span {:.1e} us stream in {:.1f} s",
      dense.events, dense.total_seconds, dense.events_per_second,
      dense.peak_rss_bytes / 1048576.0, raw_mib, double(sparse.span_us), sparse.total_seconds));
  return c.result();
}

Outcome baselines() {
  Checker c;
  std::mt19937_64 rng(20240608);
  std::vector<FeatureVector> x;
  std::vector<TimeRange> ranges;
  for (std::uint64_t i = 0; i < 120; ++i) {
    x.push_back(testing::random_vector(rng, 6));
    ranges.push_back({i * 10, i * 10 + 10});
  }
  const auto f = cross_modal_filter(x, x, testing::random_vector(rng, 6), compression(0.0, 8),
                                    ranges);
  for (const auto mode : {BaselineMode::kRandom, BaselineMode::kInterval}) {
    for (std::size_t budget : {std::size_t{1}, std::size_t{7}, f.size() / 2, f.size()}) {
      const auto r = sample_baseline(f, mode, budget, 99);
      const auto& tokens = r.sequence.tokens;
      c.expect(tokens.size() == budget,
               fmt::format("{} budget {} gave {}", to_string(mode), budget, tokens.size()));
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        c.expect(tokens[i].bins.size() == 1, "token is not a singleton");
        if (i > 0) {
          c.expect(tokens[i - 1].bins[0] < tokens[i].bins[0], "tokens out of temporal order");
        }
        const auto pos = std::lower_bound(f.kept_indices.begin(), f.kept_indices.end(),
                                          tokens[i].bins[0]);
        c.expect(pos != f.kept_indices.end() && *pos == tokens[i].bins[0],
                 "token is not a kept bin");
      }
    }
  }
  const auto a = sample_baseline(f, BaselineMode::kRandom, 10, 5);
  const auto b = sample_baseline(f, BaselineMode::kRandom, 10, 5);
  const auto other = sample_baseline(f, BaselineMode::kRandom, 10, 6);
  c.expect(a.sequence.tokens == b.sequence.tokens, "random mode not seed-deterministic");
  c.expect(a.sequence.tokens != other.sequence.tokens, "seed has no effect");
  c.note(fmt::format("{} kept bins, budgets 1..{} exact in both modes", f.size(), f.size()));
  return c.result();
}

Outcome renderer(const fs::path& dir) {
  Checker c;
  const SensorGeometry g{4, 2};
  const std::vector<Event> events{{0, 1, 0, 1}, {1, 2, 1, -1}};
  const auto frame = render_frame(Bin{0, 0, 10, events}, g);
  const auto path = dir / "frame.png";
  write_png(frame, path, 1);

  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  std::vector<std::uint8_t> px;
  if (png_image_begin_read_from_file(&image, path.c_str()) != 0) {
    image.format = PNG_FORMAT_RGB;
    px.resize(PNG_IMAGE_SIZE(image));
    if (png_image_finish_read(&image, nullptr, px.data(), 0, nullptr) == 0) px.clear();
  }
  c.expect(px.size() == std::size_t{4} * 2 * 3, "PNG could not be decoded");
  auto pixel = [&](std::size_t x, std::size_t y) {
    const auto i = (y * 4 + x) * 3;
    return i + 2 < px.size() ? Rgb{px[i], px[i + 1], px[i + 2]} : Rgb{};
  };
  c.expect(pixel(1, 0) == Rgb{255, 0, 0}, "+1 pixel is not red");
  c.expect(pixel(2, 1) == Rgb{0, 0, 255}, "-1 pixel is not blue");
  c.expect(pixel(0, 0) == Rgb{255, 255, 255}, "background is not white");
  c.note("+1 -> (255,0,0), -1 -> (0,0,255) in decoded PNG");
  return c.result();
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;  // 0: no time limit of its own
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t scale = 100'000'000;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--scale") == 0 && i + 1 < argc) {
      scale = std::strtoull(argv[++i], nullptr, 10);
    } else {
      std::fprintf(stderr, "usage: %s [--scale EVENTS]\n", argv[0]);
      return 2;
    }
  }

  TempDir dir;
  const std::vector<Criterion> criteria{
      {1, "analytic diversity and cluster count", 1.0, analytic_diversity},
      {2, "HAC oracle equivalence", 60.0, hac_equivalence},
      {3, "filter soundness", 10.0, filter_soundness},
      {4, "noise-blank-noise compression", 0.0, [&] { return end_to_end(dir.path); }},
      {5, "identity configuration", 0.0, [&] { return identity(dir.path); }},
      {6, "EVS1/CMP1 round trips", 0.0, round_trips},
      {7, "scale budget", 600.0, [&] { return scale_budget(scale, dir.path); }},
      {8, "baseline modes", 0.0, baselines},
      {9, "polarity colours", 0.0, [&] { return renderer(dir.path); }},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, fmt::format("exception: {}", e.what())};
    }
    const double seconds = seconds_since(start);
    if (outcome.ok && criterion.budget_seconds > 0 && seconds >= criterion.budget_seconds) {
      outcome = {false, fmt::format("over the {:.0f} s budget", criterion.budget_seconds)};
    }
    if (!outcome.ok) ++failures;
    std::printf("[%s] %d. %s (%.3f s): %s\n", outcome.ok ? "PASS" : "FAIL", criterion.id,
                criterion.name, seconds, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
