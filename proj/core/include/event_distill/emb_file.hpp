#pragma once

// EMB1: magic "EMB1", version u16 = 1, dimension u32, count u32, then
// count * dimension little-endian IEEE-754 floats, row-major.

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "event_distill/feature.hpp"

namespace event_distill {

inline constexpr std::uint16_t kEmbVersion = 1;
inline constexpr std::size_t kEmbHeaderSize = 14;

struct EmbeddingTable {
  std::size_t dimension = 0;
  std::vector<FeatureVector> rows;
};

EmbeddingTable read_emb1(std::istream& in);
EmbeddingTable read_emb1(const std::filesystem::path& path);
void write_emb1(const EmbeddingTable& table, std::ostream& out);
void write_emb1(const EmbeddingTable& table, const std::filesystem::path& path);

/// Query index: one query string per line; line i (0-based) names row i of
/// the companion EMB1 table.
std::map<std::string, std::size_t, std::less<>> read_query_index(
    const std::filesystem::path& path);
void write_query_index(const std::vector<std::string>& queries,
                       const std::filesystem::path& path);

}  // namespace event_distill
