#pragma once

#include <istream>
#include <ostream>

#include "event_distill/event.hpp"

namespace event_distill {

/// Parses `t,x,y,p` text. Polarity may be -1, 0 or 1 (0 means negative).
/// Errors name the 1-based data row.
EventStream parse_csv(std::istream& in, SensorGeometry geometry);

void write_csv(const EventStream& stream, std::ostream& out);

}  // namespace event_distill
