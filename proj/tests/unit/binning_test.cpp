#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include <png.h>

#include "event_distill/binning.hpp"
#include "event_distill/error.hpp"
#include "event_distill/frame.hpp"
#include "event_distill/synthetic.hpp"
#include "generators.hpp"

namespace event_distill {
namespace {

const SensorGeometry kVga{640, 480};

std::vector<std::size_t> counts(const std::vector<Bin>& bins) {
  std::vector<std::size_t> out;
  for (const auto& b : bins) out.push_back(b.events.size());
  return out;
}

TEST(BinStreamTest, IntervalArithmetic) {
  const EventStream s(kVga, {{0, 0, 0, 1}, {50'000, 0, 0, 1}, {150'000, 0, 0, 1},
                             {250'000, 0, 0, 1}});
  const auto bins = bin_stream(s, 100'000);
  ASSERT_EQ(bins.size(), 3u);
  EXPECT_EQ(counts(bins), (std::vector<std::size_t>{2, 1, 1}));
  EXPECT_EQ(bins[1].t_start, 100'000u);
  EXPECT_EQ(bins[1].t_end, 200'000u);
}

TEST(BinStreamTest, SingleEventIsOneBin) {
  const EventStream s(kVga, {{777, 1, 2, -1}});
  const auto bins = bin_stream(s, 100'000);
  ASSERT_EQ(bins.size(), 1u);
  EXPECT_EQ(bins[0].events.size(), 1u);
  EXPECT_EQ(bins[0].t_start, 777u);
}

TEST(BinStreamTest, BoundaryEventGoesToLaterBin) {
  const EventStream s(kVga, {{0, 0, 0, 1}, {100, 0, 0, 1}});
  const auto bins = bin_stream(s, 100);
  EXPECT_EQ(counts(bins), (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(bin_count_for(0, 99, 100), 1u);
  EXPECT_EQ(bin_count_for(0, 100, 100), 2u);
}

TEST(BinStreamTest, BlankMiddleSegmentGivesEmptyBins) {
  const auto spec = parse_scene("noise:300000:10000;blank:500000;noise:300000:10000", kVga);
  const auto s = generate_synthetic(spec, 4);
  const auto bins = bin_stream(s, 100'000);
  // Bins lying wholly inside [300000, 800000) after the origin shift.
  std::size_t empty_inside = 0;
  for (const auto& b : bins) {
    if (b.t_start >= 300'000 && b.t_end <= 800'000) {
      EXPECT_TRUE(b.empty()) << "bin " << b.index;
      ++empty_inside;
    }
  }
  EXPECT_GE(empty_inside, 4u);
}

TEST(BinStreamTest, Errors) {
  EXPECT_THROW(bin_stream(EventStream(kVga, {}), 100), Error);
  EXPECT_THROW(bin_stream(EventStream(kVga, {{1, 1, 1, 1}}), 0), Error);
}

TEST(BinStreamProperty, PartitionAndTiling) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    auto s = testing::random_stream(rng, 300);
    if (s.empty()) continue;
    const std::uint64_t width = 1 + rng() % (std::uint64_t{1} << 38);
    const auto bins = bin_stream(s, width);
    ASSERT_EQ(bins.size(), bin_count_for(s.min_t(), s.max_t(), width));
    std::size_t total = 0;
    const Event* cursor = s.events().data();
    for (std::size_t i = 0; i < bins.size(); ++i) {
      ASSERT_EQ(bins[i].index, i);
      ASSERT_EQ(bins[i].t_start, s.min_t() + i * width);
      ASSERT_EQ(bins[i].t_end, bins[i].t_start + width);
      // Slices are contiguous: concatenation reproduces the stream.
      ASSERT_EQ(bins[i].events.data(), cursor);
      cursor += bins[i].events.size();
      for (const auto& e : bins[i].events) {
        ASSERT_GE(e.t, bins[i].t_start);
        ASSERT_LT(e.t, bins[i].t_end);
      }
      total += bins[i].events.size();
    }
    ASSERT_EQ(total, s.size());
  }
}

TEST(BinStreamProperty, ShiftInvariance) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = testing::random_stream(rng, 200);
    if (s.empty()) continue;
    const std::uint64_t shift = rng() % (std::uint64_t{1} << 50);
    std::vector<Event> moved(s.events().begin(), s.events().end());
    for (auto& e : moved) e.t += shift;
    const EventStream shifted(s.geometry(), moved);
    const std::uint64_t width = 1 + rng() % (std::uint64_t{1} << 36);
    const auto a = bin_stream(s, width);
    const auto b = bin_stream(shifted, width);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      ASSERT_EQ(a[i].events.size(), b[i].events.size());
      for (std::size_t j = 0; j < a[i].events.size(); ++j) {
        auto e = a[i].events[j];
        e.t += shift;
        ASSERT_EQ(e, b[i].events[j]);
      }
    }
  }
}

TEST(StreamingBinnerTest, MatchesInMemoryBinning) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = testing::random_stream(rng, 400);
    if (s.empty()) continue;
    const std::uint64_t width = 1 + rng() % (std::uint64_t{1} << 37);
    const auto expected = bin_stream(s, width);

    std::vector<std::pair<Bin, std::vector<Event>>> got;
    StreamingBinner::Limits limits{1 + rng() % 5, 1 + rng() % 50};
    StreamingBinner binner(
        width,
        [&](std::span<const Bin> bins) {
          for (const auto& b : bins) {
            got.push_back({b, std::vector<Event>(b.events.begin(), b.events.end())});
          }
        },
        limits);
    const auto events = s.events();
    for (std::size_t i = 0; i < events.size();) {
      const auto n = std::min<std::size_t>(1 + rng() % 17, events.size() - i);
      binner.push(events.subspan(i, n));
      i += n;
    }
    binner.finish();
    ASSERT_EQ(got.size(), expected.size());
    EXPECT_EQ(binner.bins_emitted(), expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      ASSERT_EQ(got[i].first.index, expected[i].index);
      ASSERT_EQ(got[i].first.t_start, expected[i].t_start);
      ASSERT_EQ(got[i].first.t_end, expected[i].t_end);
      ASSERT_TRUE(std::equal(got[i].second.begin(), got[i].second.end(),
                             expected[i].events.begin(), expected[i].events.end()));
    }
  }
}

TEST(StreamingBinnerTest, RejectsOutOfOrderAndEmpty) {
  StreamingBinner binner(10, [](std::span<const Bin>) {});
  const std::vector<Event> events{{5, 0, 0, 1}, {4, 0, 0, 1}};
  EXPECT_THROW(binner.push(events), Error);
  StreamingBinner empty(10, [](std::span<const Bin>) {});
  EXPECT_THROW(empty.finish(), Error);
}

TEST(RenderFrameTest, SingleEvent) {
  const EventStream s({8, 8}, {{0, 2, 3, 1}});
  const auto frame = render_frame(bin_stream(s, 10)[0], s.geometry());
  for (std::uint32_t y = 0; y < 8; ++y) {
    for (std::uint32_t x = 0; x < 8; ++x) {
      EXPECT_EQ(frame.at(x, y), (x == 2 && y == 3) ? 1 : 0);
    }
  }
}

TEST(RenderFrameTest, OppositePolaritiesCancel) {
  const EventStream s({8, 8}, {{0, 1, 1, 1}, {1, 1, 1, -1}});
  const auto frame = render_frame(bin_stream(s, 10)[0], s.geometry());
  EXPECT_EQ(frame.at(1, 1), 0);
}

TEST(RenderFrameTest, EmptyBinIsAllZero) {
  const EventStream s({8, 8}, {{0, 1, 1, 1}, {100, 1, 1, 1}});
  const auto bins = bin_stream(s, 10);
  ASSERT_TRUE(bins[5].empty());
  const auto frame = render_frame(bins[5], s.geometry());
  EXPECT_TRUE(std::all_of(frame.values().begin(), frame.values().end(),
                          [](std::int32_t v) { return v == 0; }));
}

TEST(RenderFrameProperty, Linearity) {
  std::mt19937_64 rng(24);
  const SensorGeometry g{16, 16};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Event> a;
    std::vector<Event> b;
    for (int i = 0; i < 40; ++i) {
      Event e{static_cast<std::uint64_t>(i), static_cast<std::uint16_t>(rng() % 16),
              static_cast<std::uint16_t>(rng() % 16), (rng() & 1) ? std::int8_t{1} : std::int8_t{-1}};
      (rng() & 1 ? a : b).push_back(e);
    }
    std::vector<Event> both = a;
    both.insert(both.end(), b.begin(), b.end());
    auto frame_of = [&](const std::vector<Event>& ev) {
      return render_frame(Bin{0, 0, 100, ev}, g);
    };
    auto sum = frame_of(a);
    sum += frame_of(b);
    ASSERT_EQ(frame_of(both), sum);
  }
}

TEST(ColorMapTest, Convention) {
  EXPECT_EQ(polarity_color(0), kBackgroundColor);
  EXPECT_EQ(polarity_color(5), kPositiveColor);
  EXPECT_EQ(polarity_color(-9), kNegativeColor);
  EXPECT_EQ(polarity_color(1, 1), kPositiveColor);
  EXPECT_EQ(polarity_color(-1, 1), kNegativeColor);
  const auto faint = polarity_color(1);
  EXPECT_EQ(faint.r, 255);
  EXPECT_EQ(faint.g, faint.b);
  EXPECT_LT(faint.b, 255);
  EXPECT_THROW(polarity_color(1, 0), Error);
}

TEST(FrameExportTest, PpmLayout) {
  PolarityFrame frame({2, 1});
  frame.add(0, 0, 5);
  frame.add(1, 0, -5);
  std::ostringstream out;
  write_ppm(frame, out);
  const auto bytes = out.str();
  const std::string header = "P6\n2 1\n255\n";
  ASSERT_EQ(bytes.size(), header.size() + 6);
  EXPECT_EQ(bytes.substr(0, header.size()), header);
  const auto* px = reinterpret_cast<const unsigned char*>(bytes.data() + header.size());
  EXPECT_EQ(px[0], 255);
  EXPECT_EQ(px[1], 0);
  EXPECT_EQ(px[2], 0);
  EXPECT_EQ(px[3], 0);
  EXPECT_EQ(px[4], 0);
  EXPECT_EQ(px[5], 255);
}

TEST(FrameExportTest, PngDecodesToSamePixels) {
  PolarityFrame frame({3, 2});
  frame.add(0, 0, 2);
  frame.add(2, 1, -1);
  const auto path = std::filesystem::temp_directory_path() / "event_distill_frame_test.png";
  write_png(frame, path, 2);

  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  ASSERT_NE(png_image_begin_read_from_file(&image, path.c_str()), 0);
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
  ASSERT_NE(png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr), 0);
  std::filesystem::remove(path);
  EXPECT_EQ(pixels, to_rgb(frame, 2));
}

}  // namespace
}  // namespace event_distill
