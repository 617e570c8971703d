#include "event_distill/binning.hpp"

#include <fmt/format.h>

#include "event_distill/error.hpp"

namespace event_distill {
namespace {

void require_width(std::uint64_t bin_width) {
  if (bin_width == 0) throw_error(ErrorKind::kInvalidArgument, "bin width must be >= 1 us");
}

}  // namespace

std::uint64_t bin_count_for(std::uint64_t min_t, std::uint64_t max_t,
                            std::uint64_t bin_width) {
  require_width(bin_width);
  // ceil((d + 1) / w) == floor(d / w) + 1, and cannot overflow.
  return (max_t - min_t) / bin_width + 1;
}

std::vector<Bin> bin_stream(const EventStream& stream, std::uint64_t bin_width) {
  require_width(bin_width);
  if (stream.empty()) throw_error(ErrorKind::kInvalidArgument, "cannot bin an empty stream");

  const auto events = stream.events();
  const auto origin = stream.min_t();
  const auto count = bin_count_for(origin, stream.max_t(), bin_width);

  std::vector<Bin> bins;
  bins.reserve(count);
  std::size_t cursor = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto start = origin + i * bin_width;
    const auto end = start + bin_width;
    const auto begin = cursor;
    while (cursor < events.size() && events[cursor].t < end) ++cursor;
    bins.push_back(Bin{i, start, end, events.subspan(begin, cursor - begin)});
  }
  return bins;
}

StreamingBinner::StreamingBinner(std::uint64_t bin_width, BatchSink sink)
    : StreamingBinner(bin_width, std::move(sink), Limits{}) {}

StreamingBinner::StreamingBinner(std::uint64_t bin_width, BatchSink sink, Limits limits)
    : width_(bin_width), sink_(std::move(sink)), limits_(limits) {
  require_width(bin_width);
  if (limits_.max_batch_bins == 0) limits_.max_batch_bins = 1;
}

void StreamingBinner::push(std::span<const Event> events) {
  if (finished_) throw_error(ErrorKind::kInvalidArgument, "binner already finished");
  for (const auto& e : events) {
    if (!started_) {
      started_ = true;
      min_t_ = e.t;
      last_t_ = e.t;
    } else if (e.t < last_t_) {
      throw_error(ErrorKind::kParse,
                  fmt::format("event {} out of order: t={} after t={}", events_seen_, e.t,
                              last_t_));
    }
    last_t_ = e.t;
    const auto index = (e.t - min_t_) / width_;
    if (index > open_index_) {
      close_bins_through(index - 1);
      open_index_ = index;
      open_offset_ = buffer_.size();
    }
    buffer_.push_back(e);
    ++events_seen_;
  }
}

void StreamingBinner::close_bins_through(std::uint64_t last) {
  pending_.push_back({open_index_, open_offset_, buffer_.size() - open_offset_});
  if (pending_.size() >= limits_.max_batch_bins ||
      buffer_.size() >= limits_.max_batch_events) {
    flush();
  }
  for (auto index = open_index_ + 1; index <= last; ++index) {
    pending_.push_back({index, buffer_.size(), 0});
    if (pending_.size() >= limits_.max_batch_bins) flush();
  }
}

void StreamingBinner::flush() {
  if (pending_.empty()) return;
  views_.clear();
  views_.reserve(pending_.size());
  const std::span<const Event> all(buffer_);
  for (const auto& p : pending_) {
    const auto start = min_t_ + p.index * width_;
    views_.push_back(Bin{p.index, start, start + width_, all.subspan(p.offset, p.count)});
  }
  sink_(views_);
  bins_emitted_ += pending_.size();
  pending_.clear();
  buffer_.clear();
}

void StreamingBinner::finish() {
  if (finished_) return;
  if (!started_) throw_error(ErrorKind::kInvalidArgument, "cannot bin an empty stream");
  pending_.push_back({open_index_, open_offset_, buffer_.size() - open_offset_});
  flush();
  finished_ = true;
}

}  // namespace event_distill
