#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "event_distill/event.hpp"

namespace event_distill {

enum class MotionPattern { kStaticNoise, kMovingEdge, kBlank };

const char* to_string(MotionPattern pattern) noexcept;

struct SceneSegment {
  MotionPattern pattern = MotionPattern::kBlank;
  std::uint64_t duration_us = 0;
  std::uint64_t rate_hz = 0;
  // Overrides rate_hz * duration_us / 1e6 when set.
  std::optional<std::uint64_t> event_count;
};

struct SceneSpec {
  SensorGeometry geometry{640, 480};
  std::vector<SceneSegment> segments;
};

/// Parses "static-noise:1000000:1000;blank:500000;moving-edge:1000000:200",
/// i.e. `pattern:duration_us[:rate_hz]` joined by ';'.
SceneSpec parse_scene(std::string_view text, SensorGeometry geometry);
std::string format_scene(const SceneSpec& spec);

/// Events produced by one segment, with overflow checking.
std::uint64_t segment_event_count(const SceneSegment& segment);

/// Deterministic, chunked event source. Events come out time-sorted; the
/// output is a pure function of (spec, seed).
class SyntheticGenerator {
 public:
  SyntheticGenerator(SceneSpec spec, std::uint64_t seed);

  SensorGeometry geometry() const noexcept { return spec_.geometry; }
  std::uint64_t total_events() const noexcept { return total_events_; }
  std::uint64_t total_duration_us() const noexcept { return total_duration_; }

  /// Appends up to `max_events` events; returns 0 when exhausted.
  std::size_t next(std::vector<Event>& out, std::size_t max_events);

 private:
  void enter_segment(std::size_t index);
  Event make_event(const SceneSegment& segment, std::uint64_t i);
  std::uint64_t draw_below(std::uint64_t bound);

  SceneSpec spec_;
  std::uint64_t seed_;
  std::uint64_t total_events_ = 0;
  std::uint64_t total_duration_ = 0;

  std::size_t segment_ = 0;
  std::uint64_t segment_start_ = 0;
  std::uint64_t segment_count_ = 0;
  std::uint64_t emitted_in_segment_ = 0;
  std::mt19937_64 rng_;
};

EventStream generate_synthetic(const SceneSpec& spec, std::uint64_t seed);

}  // namespace event_distill
