#include "event_distill/csv.hpp"

#include <array>
#include <charconv>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "event_distill/error.hpp"

namespace event_distill {
namespace {

std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

template <typename T>
bool parse_field(std::string_view field, T& out) {
  if (field.empty()) return false;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

EventStream parse_csv(std::istream& in, SensorGeometry geometry) {
  validate_geometry(geometry);

  std::string line;
  if (!std::getline(in, line) || trim_cr(line) != "t,x,y,p") {
    throw_error(ErrorKind::kParse, "CSV: expected header line 't,x,y,p'");
  }

  std::vector<Event> events;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    const auto text = trim_cr(line);
    if (text.empty()) continue;
    ++row;

    std::array<std::string_view, 4> fields;
    std::size_t n = 0;
    std::size_t start = 0;
    for (;;) {
      const auto comma = text.find(',', start);
      if (n == fields.size()) {
        n = fields.size() + 1;
        break;
      }
      fields[n++] = text.substr(start, comma == std::string_view::npos
                                           ? std::string_view::npos
                                           : comma - start);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (n != fields.size()) {
      throw_error(ErrorKind::kParse,
                  fmt::format("CSV row {}: expected 4 fields, got '{}'", row, text));
    }

    std::uint64_t t = 0;
    std::uint32_t x = 0;
    std::uint32_t y = 0;
    std::int64_t p = 0;
    if (!parse_field(fields[0], t) || !parse_field(fields[1], x) ||
        !parse_field(fields[2], y) || !parse_field(fields[3], p)) {
      throw_error(ErrorKind::kParse, fmt::format("CSV row {}: malformed row '{}'", row, text));
    }
    if (!geometry.contains(x, y)) {
      throw_error(ErrorKind::kParse,
                  fmt::format("CSV row {}: coordinate ({}, {}) out of bounds for {}x{} sensor",
                              row, x, y, geometry.width, geometry.height));
    }
    const auto polarity = normalize_polarity(p);
    if (!polarity) {
      throw_error(ErrorKind::kParse,
                  fmt::format("CSV row {}: polarity {} not in {{-1, 0, 1}}", row, p));
    }
    events.push_back(Event{t, static_cast<std::uint16_t>(x),
                           static_cast<std::uint16_t>(y), *polarity});
  }
  if (in.bad()) throw_error(ErrorKind::kIo, "CSV: read failed");
  return EventStream(geometry, std::move(events));
}

void write_csv(const EventStream& stream, std::ostream& out) {
  out << "t,x,y,p\n";
  for (const auto& e : stream.events()) {
    out << e.t << ',' << e.x << ',' << e.y << ',' << static_cast<int>(e.p) << '\n';
  }
  if (!out) throw_error(ErrorKind::kIo, "CSV: write failed");
}

}  // namespace event_distill
