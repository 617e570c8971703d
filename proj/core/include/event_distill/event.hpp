#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace event_distill {

struct SensorGeometry {
  std::uint16_t width = 0;
  std::uint16_t height = 0;

  bool contains(std::uint32_t x, std::uint32_t y) const noexcept {
    return x < width && y < height;
  }
  bool operator==(const SensorGeometry&) const = default;
};

void validate_geometry(SensorGeometry geometry);

/// One sensor report. `p` is always +1 or -1 once inside an EventStream.
struct Event {
  std::uint64_t t = 0;  // microseconds
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  std::int8_t p = 1;

  bool operator==(const Event&) const = default;
};

/// Maps the raw encodings found in event files onto {+1, -1}: 1 -> +1,
/// 0 and -1 -> -1. Anything else has no polarity.
std::optional<std::int8_t> normalize_polarity(std::int64_t raw) noexcept;

struct StreamMetadata {
  // Number of adjacent timestamp descents found (and repaired) on load.
  std::size_t order_violations = 0;
};

/// A validated, time-sorted event sequence with its sensor geometry.
/// Immutable after construction.
class EventStream {
 public:
  EventStream() = default;

  /// Validates geometry, coordinates and polarity. Unsorted input is stably
  /// sorted by t and the repair is counted in metadata().order_violations.
  /// Throws Error(kParse) naming the offending event index.
  EventStream(SensorGeometry geometry, std::vector<Event> events);

  SensorGeometry geometry() const noexcept { return geometry_; }
  std::span<const Event> events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }
  const StreamMetadata& metadata() const noexcept { return metadata_; }

  // Only meaningful for non-empty streams.
  std::uint64_t min_t() const noexcept { return events_.front().t; }
  std::uint64_t max_t() const noexcept { return events_.back().t; }
  std::uint64_t span_us() const noexcept;

  bool operator==(const EventStream& other) const {
    return geometry_ == other.geometry_ && events_ == other.events_;
  }

 private:
  SensorGeometry geometry_{};
  std::vector<Event> events_;
  StreamMetadata metadata_;
};

// Checks one event against geometry and polarity rules; throws kParse with
// `label` (e.g. "row 3") in the message.
void validate_event(const Event& event, SensorGeometry geometry,
                    const char* label_kind, std::size_t label_index);

}  // namespace event_distill
