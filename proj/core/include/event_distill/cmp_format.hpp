#pragma once

// CMP1 (little-endian): magic "CMP1", version u16, dimension u32, token
// count u32; per token: window u32, cluster u32, member count u32, members
// u32 each, t_start u64, t_end u64, then `dimension` floats.

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "event_distill/compress.hpp"

namespace event_distill {

inline constexpr std::uint16_t kCmpVersion = 1;

/// Returns bytes written.
std::uint64_t write_cmp1(const CompressedSequence& sequence, std::ostream& out);

/// Tokens and dimension only; window diagnostics are not stored.
CompressedSequence parse_cmp1(std::istream& in);

/// Same fields as CMP1, plus per-window diversity/cluster counts when known.
std::string to_json(const CompressedSequence& sequence, int indent = 2);

}  // namespace event_distill
