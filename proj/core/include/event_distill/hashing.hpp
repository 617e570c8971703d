#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "event_distill/binning.hpp"
#include "event_distill/feature.hpp"

namespace event_distill {

/// Streaming 64-bit byte hash. Each 8-byte little-endian word passes through
/// a bijective mix, so two equal-length inputs that differ in any bit always
/// produce different digests. Stable across processes and platforms.
class ByteHasher {
 public:
  static constexpr std::uint64_t kDefaultKey = 0x243f6a8885a308d3ULL;

  explicit ByteHasher(std::uint64_t key = kDefaultKey) noexcept;

  void update(std::span<const std::byte> bytes) noexcept;
  std::uint64_t digest() const noexcept;
  std::uint64_t length() const noexcept { return length_; }

 private:
  void absorb(std::uint64_t word) noexcept;

  std::uint64_t state_;
  std::uint64_t tail_ = 0;
  unsigned tail_len_ = 0;
  std::uint64_t length_ = 0;
};

std::uint64_t hash_bytes(std::span<const std::byte> bytes) noexcept;

/// Expands a digest into `dimension` coordinates in [-1, 1], one seeded mix
/// per coordinate index, then l2-normalizes.
FeatureVector expand_digest(std::uint64_t digest, std::size_t dimension,
                            std::uint64_t seed);

/// Deterministic test embedder: empty input maps to the zero vector,
/// anything else to a unit vector.
FeatureVector hash_embed(std::span<const std::byte> bytes, std::size_t dimension,
                         std::uint64_t seed);
FeatureVector hash_embed(std::string_view text, std::size_t dimension,
                         std::uint64_t seed);

/// Digest of the bin's EVS1 record bytes.
std::uint64_t hash_bin_records(const Bin& bin) noexcept;

}  // namespace event_distill
