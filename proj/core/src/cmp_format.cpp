#include "event_distill/cmp_format.hpp"

#include <array>
#include <bit>
#include <cstring>

#include <fmt/format.h>
#include <json.hpp>

#include "event_distill/error.hpp"
#include "le_bytes.hpp"

namespace event_distill {
namespace {

constexpr std::array<char, 4> kMagic{'C', 'M', 'P', '1'};
constexpr std::size_t kHeaderSize = 14;

template <typename T>
T read_le(std::istream& in, const char* what, std::size_t token) {
  std::array<std::byte, sizeof(T)> buf{};
  if (detail::read_bytes(in, buf.data(), buf.size()) != buf.size()) {
    throw_error(ErrorKind::kParse, fmt::format("CMP1: truncated {} of token {}", what, token));
  }
  return detail::load_le<T>(buf.data());
}

}  // namespace

std::uint64_t write_cmp1(const CompressedSequence& sequence, std::ostream& out) {
  detail::ByteWriter w;
  w.put_raw(kMagic.data(), kMagic.size());
  w.put<std::uint16_t>(kCmpVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(sequence.dimension));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(sequence.tokens.size()));
  for (const auto& token : sequence.tokens) {
    if (token.vector.dimension() != sequence.dimension) {
      throw_error(ErrorKind::kInvalidArgument, "CMP1: token dimension mismatch");
    }
    w.put<std::uint32_t>(token.window);
    w.put<std::uint32_t>(token.cluster);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(token.bins.size()));
    for (const auto b : token.bins) w.put<std::uint32_t>(b);
    w.put<std::uint64_t>(token.range.start);
    w.put<std::uint64_t>(token.range.end);
    for (const float v : token.vector.values) w.put_f32(v);
  }
  detail::write_bytes(out, w.bytes().data(), w.bytes().size());
  if (!out) throw_error(ErrorKind::kIo, "CMP1: write failed");
  return w.bytes().size();
}

CompressedSequence parse_cmp1(std::istream& in) {
  std::array<std::byte, kHeaderSize> header{};
  const auto got = detail::read_bytes(in, header.data(), header.size());
  if (got < 4 || std::memcmp(header.data(), kMagic.data(), 4) != 0) {
    throw_error(ErrorKind::kParse, "CMP1: bad magic");
  }
  if (got < kHeaderSize) throw_error(ErrorKind::kParse, "CMP1: truncated header");
  const auto version = detail::load_le<std::uint16_t>(header.data() + 4);
  if (version != kCmpVersion) {
    throw_error(ErrorKind::kParse, fmt::format("CMP1: unsupported version {}", version));
  }
  CompressedSequence seq;
  seq.dimension = detail::load_le<std::uint32_t>(header.data() + 6);
  const auto count = detail::load_le<std::uint32_t>(header.data() + 10);
  for (std::uint32_t i = 0; i < count; ++i) {
    Token token;
    token.window = read_le<std::uint32_t>(in, "window index", i);
    token.cluster = read_le<std::uint32_t>(in, "cluster index", i);
    const auto members = read_le<std::uint32_t>(in, "member count", i);
    token.bins.reserve(members);
    for (std::uint32_t m = 0; m < members; ++m) {
      token.bins.push_back(read_le<std::uint32_t>(in, "member", i));
    }
    token.range.start = read_le<std::uint64_t>(in, "t_start", i);
    token.range.end = read_le<std::uint64_t>(in, "t_end", i);
    token.vector = FeatureVector::zeros(seq.dimension);
    for (std::size_t d = 0; d < seq.dimension; ++d) {
      token.vector.values[d] = std::bit_cast<float>(read_le<std::uint32_t>(in, "vector", i));
    }
    seq.tokens.push_back(std::move(token));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw_error(ErrorKind::kParse, "CMP1: trailing bytes after last token");
  }
  return seq;
}

std::string to_json(const CompressedSequence& sequence, int indent) {
  nlohmann::ordered_json doc;
  doc["format"] = "CMP1";
  doc["version"] = kCmpVersion;
  doc["dimension"] = sequence.dimension;
  doc["token_count"] = sequence.tokens.size();
  auto& tokens = doc["tokens"] = nlohmann::ordered_json::array();
  for (const auto& t : sequence.tokens) {
    nlohmann::ordered_json j;
    j["window"] = t.window;
    j["cluster"] = t.cluster;
    j["bins"] = t.bins;
    j["t_start"] = t.range.start;
    j["t_end"] = t.range.end;
    j["vector"] = t.vector.values;
    tokens.push_back(std::move(j));
  }
  if (!sequence.windows.empty()) {
    auto& windows = doc["windows"] = nlohmann::ordered_json::array();
    for (std::size_t m = 0; m < sequence.windows.size(); ++m) {
      const auto& w = sequence.windows[m];
      nlohmann::ordered_json j;
      j["window"] = m;
      j["size"] = w.window.size;
      j["passthrough"] = w.window.passthrough;
      j["diversity"] = w.diversity ? nlohmann::ordered_json(*w.diversity) : nullptr;
      j["cluster_count"] = w.cluster_count;
      windows.push_back(std::move(j));
    }
  }
  return doc.dump(indent);
}

}  // namespace event_distill
