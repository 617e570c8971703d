#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "event_distill/event.hpp"

namespace event_distill {

inline constexpr std::uint64_t kDefaultBinWidthUs = 100'000;

/// Half-open time interval [start, end) in microseconds.
struct TimeRange {
  std::uint64_t start = 0;
  std::uint64_t end = 0;

  bool operator==(const TimeRange&) const = default;
};

/// A contiguous temporal slice of a stream. `events` views storage owned by
/// the producer (the EventStream, or the streaming binner during a callback).
struct Bin {
  std::size_t index = 0;
  std::uint64_t t_start = 0;
  std::uint64_t t_end = 0;
  std::span<const Event> events;

  TimeRange range() const noexcept { return {t_start, t_end}; }
  bool empty() const noexcept { return events.empty(); }
};

/// Number of bins covering [min_t, max_t] at `bin_width`:
/// ceil((max_t - min_t + 1) / bin_width).
std::uint64_t bin_count_for(std::uint64_t min_t, std::uint64_t max_t,
                            std::uint64_t bin_width);

/// Tiles a non-empty stream into bins [min_t + i*w, min_t + (i+1)*w).
/// Empty bins are kept.
std::vector<Bin> bin_stream(const EventStream& stream, std::uint64_t bin_width);

/// Single-pass binner over a time-sorted event feed. Completed bins are
/// handed to the sink in batches; the spans are valid only during the call.
/// Resident memory is bounded by the batch limits, not the stream length.
class StreamingBinner {
 public:
  using BatchSink = std::function<void(std::span<const Bin>)>;

  struct Limits {
    std::size_t max_batch_bins = 64;
    std::size_t max_batch_events = std::size_t{1} << 22;
  };

  StreamingBinner(std::uint64_t bin_width, BatchSink sink);
  StreamingBinner(std::uint64_t bin_width, BatchSink sink, Limits limits);

  /// Throws Error(kParse) if an event's timestamp is below its predecessor.
  void push(std::span<const Event> events);

  /// Flushes the open bin and any pending batch. Throws kInvalidArgument if
  /// no events were pushed.
  void finish();

  std::uint64_t bins_emitted() const noexcept { return bins_emitted_; }
  std::uint64_t events_seen() const noexcept { return events_seen_; }
  std::uint64_t min_t() const noexcept { return min_t_; }
  std::uint64_t max_t() const noexcept { return last_t_; }

 private:
  struct PendingBin {
    std::size_t index;
    std::size_t offset;
    std::size_t count;
  };

  void close_bins_through(std::uint64_t index);
  void flush();

  std::uint64_t width_;
  BatchSink sink_;
  Limits limits_;

  bool started_ = false;
  bool finished_ = false;
  std::uint64_t min_t_ = 0;
  std::uint64_t last_t_ = 0;
  std::uint64_t open_index_ = 0;
  std::size_t open_offset_ = 0;

  std::vector<Event> buffer_;
  std::vector<PendingBin> pending_;
  std::vector<Bin> views_;
  std::uint64_t bins_emitted_ = 0;
  std::uint64_t events_seen_ = 0;
};

}  // namespace event_distill
