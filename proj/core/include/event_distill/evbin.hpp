#pragma once

// EVS1: a 16-byte little-endian header followed by 13-byte records running
// to end of file.
//
//   0..3   magic "EVS1"
//   4..5   version (u16) = 1
//   6..7   width (u16)
//   8..9   height (u16)
//   10..15 reserved, zero
//   record: t (u64), x (u16), y (u16), p (i8)

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "event_distill/event.hpp"

namespace event_distill {

inline constexpr std::size_t kEvbinHeaderSize = 16;
inline constexpr std::size_t kEvbinRecordSize = 13;
inline constexpr std::uint16_t kEvbinVersion = 1;

void encode_evbin_header(SensorGeometry geometry,
                         std::span<std::byte, kEvbinHeaderSize> out) noexcept;
void encode_evbin_record(const Event& event,
                         std::span<std::byte, kEvbinRecordSize> out) noexcept;
/// Raw decode; polarity is normalized but not validated against geometry.
Event decode_evbin_record(std::span<const std::byte, kEvbinRecordSize> in);

/// Incremental EVS1 reader. Reads the header on construction and decodes
/// records in caller-sized chunks, validating each one.
class EvbinReader {
 public:
  explicit EvbinReader(std::istream& in);

  SensorGeometry geometry() const noexcept { return geometry_; }

  /// Appends up to `max_events` events to `out`; returns how many were read.
  /// 0 means end of file. Throws kParse on a partial trailing record.
  std::size_t read(std::vector<Event>& out, std::size_t max_events);

  std::uint64_t records_read() const noexcept { return records_read_; }

 private:
  std::istream& in_;
  SensorGeometry geometry_{};
  std::vector<std::byte> buffer_;
  std::uint64_t records_read_ = 0;
  bool done_ = false;
};

/// Incremental EVS1 writer. Emits the header on construction.
class EvbinWriter {
 public:
  EvbinWriter(std::ostream& out, SensorGeometry geometry);

  void write(std::span<const Event> events);
  std::uint64_t bytes_written() const noexcept { return bytes_written_; }

 private:
  std::ostream& out_;
  std::vector<std::byte> buffer_;
  std::uint64_t bytes_written_ = 0;
};

EventStream parse_evbin(std::istream& in);

/// Returns the number of bytes written: 16 + 13 * stream.size().
std::uint64_t write_evbin(const EventStream& stream, std::ostream& out);

}  // namespace event_distill
