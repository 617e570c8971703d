#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <vector>

#include "event_distill/binning.hpp"
#include "event_distill/event.hpp"

namespace event_distill {

/// Per-pixel signed polarity sums for one bin, row-major.
class PolarityFrame {
 public:
  explicit PolarityFrame(SensorGeometry geometry);

  SensorGeometry geometry() const noexcept { return geometry_; }
  std::int32_t at(std::uint32_t x, std::uint32_t y) const;
  void add(std::uint32_t x, std::uint32_t y, std::int32_t value);
  const std::vector<std::int32_t>& values() const noexcept { return values_; }

  PolarityFrame& operator+=(const PolarityFrame& other);
  bool operator==(const PolarityFrame&) const = default;

 private:
  SensorGeometry geometry_;
  std::vector<std::int32_t> values_;
};

PolarityFrame render_frame(const Bin& bin, SensorGeometry geometry);

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb&) const = default;
};

inline constexpr Rgb kPositiveColor{255, 0, 0};
inline constexpr Rgb kNegativeColor{0, 0, 255};
inline constexpr Rgb kBackgroundColor{255, 255, 255};
inline constexpr std::int32_t kDefaultMaxCount = 5;

/// Linear blend from background toward red (positive) or blue (negative),
/// saturating at |value| >= max_count.
Rgb polarity_color(std::int32_t value, std::int32_t max_count = kDefaultMaxCount);

/// Interleaved 8-bit RGB, row-major.
std::vector<std::uint8_t> to_rgb(const PolarityFrame& frame,
                                 std::int32_t max_count = kDefaultMaxCount);

void write_ppm(const PolarityFrame& frame, std::ostream& out,
               std::int32_t max_count = kDefaultMaxCount);
void write_png(const PolarityFrame& frame, const std::filesystem::path& path,
               std::int32_t max_count = kDefaultMaxCount);

}  // namespace event_distill
