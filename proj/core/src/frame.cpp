#include "event_distill/frame.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <memory>

#include <fmt/format.h>
#include <png.h>

#include "event_distill/error.hpp"

namespace event_distill {

PolarityFrame::PolarityFrame(SensorGeometry geometry)
    : geometry_(geometry),
      values_(static_cast<std::size_t>(geometry.width) * geometry.height, 0) {
  validate_geometry(geometry);
}

std::int32_t PolarityFrame::at(std::uint32_t x, std::uint32_t y) const {
  if (!geometry_.contains(x, y)) {
    throw_error(ErrorKind::kInvalidArgument, fmt::format("pixel ({}, {}) outside frame", x, y));
  }
  return values_[static_cast<std::size_t>(y) * geometry_.width + x];
}

void PolarityFrame::add(std::uint32_t x, std::uint32_t y, std::int32_t value) {
  if (!geometry_.contains(x, y)) {
    throw_error(ErrorKind::kInvalidArgument, fmt::format("pixel ({}, {}) outside frame", x, y));
  }
  values_[static_cast<std::size_t>(y) * geometry_.width + x] += value;
}

PolarityFrame& PolarityFrame::operator+=(const PolarityFrame& other) {
  if (other.geometry_ != geometry_) {
    throw_error(ErrorKind::kInvalidArgument, "frame geometry mismatch");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

PolarityFrame render_frame(const Bin& bin, SensorGeometry geometry) {
  PolarityFrame frame(geometry);
  for (const auto& e : bin.events) frame.add(e.x, e.y, e.p);
  return frame;
}

Rgb polarity_color(std::int32_t value, std::int32_t max_count) {
  if (max_count < 1) throw_error(ErrorKind::kInvalidArgument, "max_count must be >= 1");
  if (value == 0) return kBackgroundColor;
  const auto magnitude = std::min<std::int64_t>(std::abs(static_cast<std::int64_t>(value)),
                                                max_count);
  // Channels that fade out as magnitude grows.
  const auto fade = static_cast<std::uint8_t>(255 - (255 * magnitude) / max_count);
  return value > 0 ? Rgb{255, fade, fade} : Rgb{fade, fade, 255};
}

std::vector<std::uint8_t> to_rgb(const PolarityFrame& frame, std::int32_t max_count) {
  std::vector<std::uint8_t> rgb;
  rgb.reserve(frame.values().size() * 3);
  for (const auto v : frame.values()) {
    const auto c = polarity_color(v, max_count);
    rgb.push_back(c.r);
    rgb.push_back(c.g);
    rgb.push_back(c.b);
  }
  return rgb;
}

void write_ppm(const PolarityFrame& frame, std::ostream& out, std::int32_t max_count) {
  const auto rgb = to_rgb(frame, max_count);
  out << "P6\n" << frame.geometry().width << ' ' << frame.geometry().height << "\n255\n";
  out.write(reinterpret_cast<const char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
  if (!out) throw_error(ErrorKind::kIo, "PPM: write failed");
}

void write_png(const PolarityFrame& frame, const std::filesystem::path& path,
               std::int32_t max_count) {
  const auto rgb = to_rgb(frame, max_count);
  const auto w = frame.geometry().width;
  const auto h = frame.geometry().height;

  std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(std::fopen(path.c_str(), "wb"),
                                                       &std::fclose);
  if (!file) throw_error(ErrorKind::kIo, fmt::format("PNG: cannot open {}", path.string()));

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw_error(ErrorKind::kIo, "PNG: libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw_error(ErrorKind::kIo, fmt::format("PNG: encode failed for {}", path.string()));
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, w, h, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::uint32_t y = 0; y < h; ++y) {
    png_write_row(png, rgb.data() + static_cast<std::size_t>(y) * w * 3);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace event_distill
