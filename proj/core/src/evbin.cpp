#include "event_distill/evbin.hpp"

#include <array>
#include <cstring>

#include <fmt/format.h>

#include "event_distill/error.hpp"
#include "le_bytes.hpp"

namespace event_distill {
namespace {

constexpr std::array<char, 4> kMagic{'E', 'V', 'S', '1'};
constexpr std::size_t kWriteChunkEvents = 1 << 14;

}  // namespace

void encode_evbin_header(SensorGeometry geometry,
                         std::span<std::byte, kEvbinHeaderSize> out) noexcept {
  std::memset(out.data(), 0, out.size());
  std::memcpy(out.data(), kMagic.data(), kMagic.size());
  detail::store_le<std::uint16_t>(out.data() + 4, kEvbinVersion);
  detail::store_le<std::uint16_t>(out.data() + 6, geometry.width);
  detail::store_le<std::uint16_t>(out.data() + 8, geometry.height);
}

void encode_evbin_record(const Event& event,
                         std::span<std::byte, kEvbinRecordSize> out) noexcept {
  detail::store_le<std::uint64_t>(out.data(), event.t);
  detail::store_le<std::uint16_t>(out.data() + 8, event.x);
  detail::store_le<std::uint16_t>(out.data() + 10, event.y);
  detail::store_le<std::int8_t>(out.data() + 12, event.p);
}

Event decode_evbin_record(std::span<const std::byte, kEvbinRecordSize> in) {
  Event e;
  e.t = detail::load_le<std::uint64_t>(in.data());
  e.x = detail::load_le<std::uint16_t>(in.data() + 8);
  e.y = detail::load_le<std::uint16_t>(in.data() + 10);
  const auto raw = detail::load_le<std::int8_t>(in.data() + 12);
  // Out-of-set values are kept raw so validation can report them.
  e.p = normalize_polarity(raw).value_or(raw);
  return e;
}

EvbinReader::EvbinReader(std::istream& in) : in_(in) {
  std::array<std::byte, kEvbinHeaderSize> header{};
  const auto got = detail::read_bytes(in_, header.data(), header.size());
  if (got < 4 || std::memcmp(header.data(), kMagic.data(), 4) != 0) {
    throw_error(ErrorKind::kParse, "EVS1: bad magic");
  }
  if (got < kEvbinHeaderSize) {
    throw_error(ErrorKind::kParse,
                fmt::format("EVS1: truncated header ({} of {} bytes)", got,
                            kEvbinHeaderSize));
  }
  const auto version = detail::load_le<std::uint16_t>(header.data() + 4);
  if (version != kEvbinVersion) {
    throw_error(ErrorKind::kParse, fmt::format("EVS1: unsupported version {}", version));
  }
  geometry_.width = detail::load_le<std::uint16_t>(header.data() + 6);
  geometry_.height = detail::load_le<std::uint16_t>(header.data() + 8);
  if (geometry_.width < 1 || geometry_.height < 1) {
    throw_error(ErrorKind::kParse,
                fmt::format("EVS1: invalid geometry {}x{}", geometry_.width,
                            geometry_.height));
  }
}

std::size_t EvbinReader::read(std::vector<Event>& out, std::size_t max_events) {
  if (done_ || max_events == 0) return 0;
  buffer_.resize(max_events * kEvbinRecordSize);
  const auto got = detail::read_bytes(in_, buffer_.data(), buffer_.size());
  if (got < buffer_.size()) done_ = true;
  if (got % kEvbinRecordSize != 0) {
    throw_error(ErrorKind::kParse,
                fmt::format("EVS1: truncated record section: {} trailing bytes after "
                            "record {} (records are {} bytes)",
                            got % kEvbinRecordSize, records_read_ + got / kEvbinRecordSize,
                            kEvbinRecordSize));
  }
  const std::size_t n = got / kEvbinRecordSize;
  out.reserve(out.size() + n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::span<const std::byte, kEvbinRecordSize> rec(
        buffer_.data() + i * kEvbinRecordSize, kEvbinRecordSize);
    Event e = decode_evbin_record(rec);
    validate_event(e, geometry_, "record", records_read_ + i);
    out.push_back(e);
  }
  records_read_ += n;
  return n;
}

EvbinWriter::EvbinWriter(std::ostream& out, SensorGeometry geometry) : out_(out) {
  validate_geometry(geometry);
  std::array<std::byte, kEvbinHeaderSize> header{};
  encode_evbin_header(geometry, header);
  detail::write_bytes(out_, header.data(), header.size());
  if (!out_) throw_error(ErrorKind::kIo, "EVS1: failed to write header");
  bytes_written_ = kEvbinHeaderSize;
}

void EvbinWriter::write(std::span<const Event> events) {
  while (!events.empty()) {
    const auto n = std::min(events.size(), kWriteChunkEvents);
    buffer_.resize(n * kEvbinRecordSize);
    for (std::size_t i = 0; i < n; ++i) {
      encode_evbin_record(events[i], std::span<std::byte, kEvbinRecordSize>(
                                         buffer_.data() + i * kEvbinRecordSize,
                                         kEvbinRecordSize));
    }
    detail::write_bytes(out_, buffer_.data(), buffer_.size());
    if (!out_) throw_error(ErrorKind::kIo, "EVS1: write failed");
    bytes_written_ += buffer_.size();
    events = events.subspan(n);
  }
}

EventStream parse_evbin(std::istream& in) {
  EvbinReader reader(in);
  std::vector<Event> events;
  while (reader.read(events, 1 << 16) > 0) {
  }
  return EventStream(reader.geometry(), std::move(events));
}

std::uint64_t write_evbin(const EventStream& stream, std::ostream& out) {
  EvbinWriter writer(out, stream.geometry());
  writer.write(stream.events());
  out.flush();
  if (!out) throw_error(ErrorKind::kIo, "EVS1: flush failed");
  return writer.bytes_written();
}

}  // namespace event_distill
