#include "event_distill/synthetic.hpp"

#include <algorithm>
#include <charconv>
#include <string>

#include <fmt/format.h>

#include "event_distill/error.hpp"
#include "wide_math.hpp"

namespace event_distill {
namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw_error(ErrorKind::kConfig,
                fmt::format("scene: invalid {} '{}'", what, text));
  }
  return value;
}

MotionPattern parse_pattern(std::string_view name) {
  if (name == "static-noise" || name == "noise") return MotionPattern::kStaticNoise;
  if (name == "moving-edge" || name == "edge") return MotionPattern::kMovingEdge;
  if (name == "blank") return MotionPattern::kBlank;
  throw_error(ErrorKind::kConfig, fmt::format("scene: unknown pattern '{}'", name));
}

}  // namespace

const char* to_string(MotionPattern pattern) noexcept {
  switch (pattern) {
    case MotionPattern::kStaticNoise: return "static-noise";
    case MotionPattern::kMovingEdge: return "moving-edge";
    case MotionPattern::kBlank: return "blank";
  }
  return "?";
}

SceneSpec parse_scene(std::string_view text, SensorGeometry geometry) {
  validate_geometry(geometry);
  SceneSpec spec;
  spec.geometry = geometry;
  while (!text.empty()) {
    const auto semi = text.find(';');
    auto item = text.substr(0, semi);
    text = semi == std::string_view::npos ? std::string_view{} : text.substr(semi + 1);
    if (item.empty()) continue;

    std::vector<std::string_view> parts;
    while (true) {
      const auto colon = item.find(':');
      parts.push_back(item.substr(0, colon));
      if (colon == std::string_view::npos) break;
      item = item.substr(colon + 1);
    }
    SceneSegment segment;
    segment.pattern = parse_pattern(parts[0]);
    const std::size_t expected = segment.pattern == MotionPattern::kBlank ? 2 : 3;
    if (parts.size() != expected &&
        !(segment.pattern == MotionPattern::kBlank && parts.size() == 3)) {
      throw_error(ErrorKind::kConfig,
                  fmt::format("scene: segment '{}' needs {} fields", parts[0], expected));
    }
    segment.duration_us = parse_u64(parts[1], "duration");
    if (parts.size() == 3) segment.rate_hz = parse_u64(parts[2], "rate");
    if (segment.pattern == MotionPattern::kBlank) segment.rate_hz = 0;
    spec.segments.push_back(segment);
  }
  if (spec.segments.empty()) throw_error(ErrorKind::kConfig, "scene: no segments");
  return spec;
}

std::string format_scene(const SceneSpec& spec) {
  std::string out;
  for (const auto& s : spec.segments) {
    if (!out.empty()) out += ';';
    if (s.pattern == MotionPattern::kBlank) {
      out += fmt::format("blank:{}", s.duration_us);
    } else {
      out += fmt::format("{}:{}:{}", to_string(s.pattern), s.duration_us, s.rate_hz);
    }
  }
  return out;
}

std::uint64_t segment_event_count(const SceneSegment& segment) {
  if (segment.pattern == MotionPattern::kBlank) return 0;
  if (segment.event_count) return *segment.event_count;
  std::uint64_t product = 0;
  if (__builtin_mul_overflow(segment.rate_hz, segment.duration_us, &product)) {
    throw_error(ErrorKind::kConfig,
                fmt::format("scene: rate {} ev/s over {} us overflows the event count",
                            segment.rate_hz, segment.duration_us));
  }
  return product / 1'000'000;
}

SyntheticGenerator::SyntheticGenerator(SceneSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)), seed_(seed) {
  validate_geometry(spec_.geometry);
  for (const auto& s : spec_.segments) {
    const auto count = segment_event_count(s);
    if (__builtin_add_overflow(total_events_, count, &total_events_) ||
        __builtin_add_overflow(total_duration_, s.duration_us, &total_duration_)) {
      throw_error(ErrorKind::kConfig, "scene: total event count or duration overflows");
    }
    if (count > 0 && s.duration_us == 0) {
      throw_error(ErrorKind::kConfig, "scene: events requested in a zero-length segment");
    }
  }
  if (total_duration_ == 0) throw_error(ErrorKind::kConfig, "scene: zero total duration");
  enter_segment(0);
}

void SyntheticGenerator::enter_segment(std::size_t index) {
  segment_ = index;
  emitted_in_segment_ = 0;
  if (segment_ < spec_.segments.size()) {
    segment_count_ = segment_event_count(spec_.segments[segment_]);
    rng_.seed(splitmix64(seed_ ^ splitmix64(index)));
  }
}

std::uint64_t SyntheticGenerator::draw_below(std::uint64_t bound) {
  return detail::mul_hi(rng_(), bound);
}

Event SyntheticGenerator::make_event(const SceneSegment& segment, std::uint64_t i) {
  const auto dur = segment.duration_us;
  const auto lo = detail::mul_div(i, dur, segment_count_);
  const auto hi = detail::mul_div(i + 1, dur, segment_count_);
  const auto offset = hi > lo ? lo + draw_below(hi - lo) : lo;

  Event e;
  e.t = segment_start_ + offset;
  const auto w = spec_.geometry.width;
  const auto h = spec_.geometry.height;
  if (segment.pattern == MotionPattern::kStaticNoise) {
    e.x = static_cast<std::uint16_t>(draw_below(w));
    e.y = static_cast<std::uint16_t>(draw_below(h));
    e.p = draw_below(2) ? 1 : -1;
  } else {
    // A vertical edge sweeping left to right over the segment.
    const auto edge = std::min<std::uint64_t>(detail::mul_div(offset, w, dur), w - 1u);
    e.x = static_cast<std::uint16_t>(edge);
    e.y = static_cast<std::uint16_t>(draw_below(h));
    e.p = draw_below(4) == 0 ? -1 : 1;
  }
  return e;
}

std::size_t SyntheticGenerator::next(std::vector<Event>& out, std::size_t max_events) {
  std::size_t produced = 0;
  while (produced < max_events && segment_ < spec_.segments.size()) {
    const auto& segment = spec_.segments[segment_];
    if (emitted_in_segment_ >= segment_count_) {
      segment_start_ += segment.duration_us;
      enter_segment(segment_ + 1);
      continue;
    }
    const auto n = std::min<std::uint64_t>(max_events - produced,
                                           segment_count_ - emitted_in_segment_);
    for (std::uint64_t j = 0; j < n; ++j) {
      out.push_back(make_event(segment, emitted_in_segment_ + j));
    }
    emitted_in_segment_ += n;
    produced += n;
  }
  return produced;
}

EventStream generate_synthetic(const SceneSpec& spec, std::uint64_t seed) {
  SyntheticGenerator gen(spec, seed);
  std::vector<Event> events;
  events.reserve(gen.total_events());
  while (gen.next(events, 1 << 16) > 0) {
  }
  return EventStream(gen.geometry(), std::move(events));
}

}  // namespace event_distill
