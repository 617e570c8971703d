#pragma once

#include <cstdint>

namespace event_distill::detail {

__extension__ typedef unsigned __int128 uint128;

// High 64 bits of a * b: maps a uniform 64-bit draw onto [0, bound).
inline std::uint64_t mul_hi(std::uint64_t a, std::uint64_t b) noexcept {
  return static_cast<std::uint64_t>((static_cast<uint128>(a) * b) >> 64);
}

// floor(a * b / c) without intermediate overflow.
inline std::uint64_t mul_div(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
  return static_cast<std::uint64_t>(static_cast<uint128>(a) * b / c);
}

}  // namespace event_distill::detail
