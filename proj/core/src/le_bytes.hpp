#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <vector>

namespace event_distill::detail {

template <typename T>
inline void store_le(std::byte* out, T value) noexcept {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out[i] = static_cast<std::byte>(u & 0xFF);
    u = static_cast<U>(u >> 8);
  }
}

template <typename T>
inline T load_le(const std::byte* in) noexcept {
  using U = std::make_unsigned_t<T>;
  U u = 0;
  for (std::size_t i = sizeof(T); i-- > 0;) {
    u = static_cast<U>((u << 8) | static_cast<U>(in[i]));
  }
  return static_cast<T>(u);
}

inline void store_f32(std::byte* out, float value) noexcept {
  store_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(value));
}

inline float load_f32(const std::byte* in) noexcept {
  return std::bit_cast<float>(load_le<std::uint32_t>(in));
}

// Appends little-endian values to a byte buffer.
class ByteWriter {
 public:
  template <typename T>
  void put(T value) {
    const auto at = bytes_.size();
    bytes_.resize(at + sizeof(T));
    store_le<T>(bytes_.data() + at, value);
  }
  void put_f32(float value) {
    const auto at = bytes_.size();
    bytes_.resize(at + 4);
    store_f32(bytes_.data() + at, value);
  }
  void put_raw(const char* data, std::size_t n) {
    const auto* p = reinterpret_cast<const std::byte*>(data);
    bytes_.insert(bytes_.end(), p, p + n);
  }
  const std::vector<std::byte>& bytes() const noexcept { return bytes_; }
  void clear() noexcept { bytes_.clear(); }

 private:
  std::vector<std::byte> bytes_;
};

// Reads exactly n bytes; returns the count actually read.
inline std::size_t read_bytes(std::istream& in, std::byte* out, std::size_t n) {
  in.read(reinterpret_cast<char*>(out), static_cast<std::streamsize>(n));
  return static_cast<std::size_t>(in.gcount());
}

inline void write_bytes(std::ostream& out, const std::byte* data, std::size_t n) {
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n));
}

}  // namespace event_distill::detail
