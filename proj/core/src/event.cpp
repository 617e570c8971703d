#include "event_distill/event.hpp"

#include <algorithm>
#include <string>

#include <fmt/format.h>

#include "event_distill/error.hpp"

namespace event_distill {

void validate_geometry(SensorGeometry geometry) {
  if (geometry.width < 1 || geometry.height < 1) {
    throw_error(ErrorKind::kInvalidArgument,
                fmt::format("sensor geometry must be at least 1x1, got {}x{}",
                            geometry.width, geometry.height));
  }
}

std::optional<std::int8_t> normalize_polarity(std::int64_t raw) noexcept {
  switch (raw) {
    case 1: return std::int8_t{1};
    case 0:
    case -1: return std::int8_t{-1};
    default: return std::nullopt;
  }
}

void validate_event(const Event& event, SensorGeometry geometry,
                    const char* label_kind, std::size_t label_index) {
  if (!geometry.contains(event.x, event.y)) {
    throw_error(ErrorKind::kParse,
                fmt::format("{} {}: coordinate ({}, {}) out of bounds for {}x{} sensor",
                            label_kind, label_index, event.x, event.y,
                            geometry.width, geometry.height));
  }
  if (event.p != 1 && event.p != -1) {
    throw_error(ErrorKind::kParse, fmt::format("{} {}: polarity {} is not +1/-1",
                                               label_kind, label_index,
                                               static_cast<int>(event.p)));
  }
}

EventStream::EventStream(SensorGeometry geometry, std::vector<Event> events)
    : geometry_(geometry), events_(std::move(events)) {
  validate_geometry(geometry_);
  for (std::size_t i = 0; i < events_.size(); ++i) {
    validate_event(events_[i], geometry_, "event", i);
    if (i > 0 && events_[i].t < events_[i - 1].t) ++metadata_.order_violations;
  }
  if (metadata_.order_violations > 0) {
    std::stable_sort(events_.begin(), events_.end(),
                     [](const Event& a, const Event& b) { return a.t < b.t; });
  }
}

std::uint64_t EventStream::span_us() const noexcept {
  return events_.empty() ? 0 : max_t() - min_t();
}

}  // namespace event_distill
