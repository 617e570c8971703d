#include "event_distill/hashing.hpp"

#include <array>
#include <bit>
#include <cmath>

#include "event_distill/error.hpp"
#include "event_distill/evbin.hpp"

namespace event_distill {
namespace {

constexpr std::uint64_t kMul = 0x9fb21c651e98df25ULL;  // odd
constexpr std::uint64_t kAdd = 0xc2b2ae3d27d4eb4fULL;
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Murmur3 finalizer.
std::uint64_t fmix64(std::uint64_t x) noexcept {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

}  // namespace

ByteHasher::ByteHasher(std::uint64_t key) noexcept : state_(fmix64(key ^ kAdd)) {}

void ByteHasher::absorb(std::uint64_t word) noexcept {
  // Every step is a bijection of state_ for a fixed word.
  state_ = std::rotl(state_ ^ splitmix64(word), 29) * kMul + kAdd;
}

void ByteHasher::update(std::span<const std::byte> bytes) noexcept {
  length_ += bytes.size();
  std::size_t i = 0;
  while (tail_len_ != 0 && i < bytes.size()) {
    tail_ |= static_cast<std::uint64_t>(bytes[i++]) << (8 * tail_len_);
    if (++tail_len_ == 8) {
      absorb(tail_);
      tail_ = 0;
      tail_len_ = 0;
    }
  }
  for (; i + 8 <= bytes.size(); i += 8) {
    std::uint64_t word = 0;
    for (int b = 7; b >= 0; --b) {
      word = (word << 8) | static_cast<std::uint64_t>(bytes[i + b]);
    }
    absorb(word);
  }
  for (; i < bytes.size(); ++i) {
    tail_ |= static_cast<std::uint64_t>(bytes[i]) << (8 * tail_len_);
    ++tail_len_;
  }
}

std::uint64_t ByteHasher::digest() const noexcept {
  auto h = state_;
  // The final partial word is tagged with its length so trailing zero bytes
  // still change the digest.
  h = std::rotl(h ^ splitmix64(tail_ ^ (std::uint64_t{tail_len_} << 59)), 29) * kMul + kAdd;
  return fmix64(h ^ length_);
}

std::uint64_t hash_bytes(std::span<const std::byte> bytes) noexcept {
  ByteHasher hasher;
  hasher.update(bytes);
  return hasher.digest();
}

FeatureVector expand_digest(std::uint64_t digest, std::size_t dimension, std::uint64_t seed) {
  if (dimension == 0) throw_error(ErrorKind::kInvalidArgument, "embedding dimension must be >= 1");
  std::vector<double> coords(dimension);
  const auto seed_mix = splitmix64(seed);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < dimension; ++i) {
    const auto bits = splitmix64(digest ^ splitmix64(seed_mix + (i + 1) * kGolden));
    const double unit = static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0, 1)
    coords[i] = 2.0 * unit - 1.0;
    norm2 += coords[i] * coords[i];
  }
  const double inv = norm2 > 0.0 ? 1.0 / std::sqrt(norm2) : 0.0;
  FeatureVector v = FeatureVector::zeros(dimension);
  for (std::size_t i = 0; i < dimension; ++i) {
    v.values[i] = static_cast<float>(coords[i] * inv);
  }
  return v;
}

FeatureVector hash_embed(std::span<const std::byte> bytes, std::size_t dimension,
                         std::uint64_t seed) {
  if (bytes.empty()) {
    if (dimension == 0) throw_error(ErrorKind::kInvalidArgument, "embedding dimension must be >= 1");
    return FeatureVector::zeros(dimension);
  }
  return expand_digest(hash_bytes(bytes), dimension, seed);
}

FeatureVector hash_embed(std::string_view text, std::size_t dimension, std::uint64_t seed) {
  return hash_embed(std::as_bytes(std::span(text.data(), text.size())), dimension, seed);
}

std::uint64_t hash_bin_records(const Bin& bin) noexcept {
  ByteHasher hasher;
  std::array<std::byte, kEvbinRecordSize> record{};
  for (const auto& e : bin.events) {
    encode_evbin_record(e, record);
    hasher.update(record);
  }
  return hasher.digest();
}

}  // namespace event_distill
