#pragma once

#include <cstddef>
#include <string_view>

namespace event_distill {

enum class RemainderPolicy {
  kShrunkWindow,  // trailing k mod J bins form one smaller window
  kPassthrough,   // trailing bins become singleton tokens, unclustered
};

RemainderPolicy parse_remainder_policy(std::string_view text);
const char* to_string(RemainderPolicy policy) noexcept;

inline constexpr double kDefaultTau = 0.5;
inline constexpr std::size_t kDefaultWindowSize = 8;

struct CompressionConfig {
  double tau = kDefaultTau;                 // selection threshold, [-1, 1]
  std::size_t window_size = kDefaultWindowSize;  // J >= 1
  RemainderPolicy remainder = RemainderPolicy::kShrunkWindow;
  bool fallback_top1 = true;

  void validate() const;
};

}  // namespace event_distill
