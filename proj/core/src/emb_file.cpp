#include "event_distill/emb_file.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>

#include <fmt/format.h>

#include "event_distill/error.hpp"
#include "le_bytes.hpp"

namespace event_distill {
namespace {

constexpr std::array<char, 4> kMagic{'E', 'M', 'B', '1'};

}  // namespace

EmbeddingTable read_emb1(std::istream& in) {
  std::array<std::byte, kEmbHeaderSize> header{};
  const auto got = detail::read_bytes(in, header.data(), header.size());
  if (got < 4 || std::memcmp(header.data(), kMagic.data(), 4) != 0) {
    throw_error(ErrorKind::kParse, "EMB1: bad magic");
  }
  if (got < header.size()) throw_error(ErrorKind::kParse, "EMB1: truncated header");
  const auto version = detail::load_le<std::uint16_t>(header.data() + 4);
  if (version != kEmbVersion) {
    throw_error(ErrorKind::kParse, fmt::format("EMB1: unsupported version {}", version));
  }
  EmbeddingTable table;
  table.dimension = detail::load_le<std::uint32_t>(header.data() + 6);
  const auto count = detail::load_le<std::uint32_t>(header.data() + 10);
  if (table.dimension == 0 && count > 0) {
    throw_error(ErrorKind::kParse, "EMB1: zero dimension with non-empty table");
  }

  std::vector<std::byte> row(table.dimension * 4);
  table.rows.reserve(count);
  for (std::uint32_t r = 0; r < count; ++r) {
    if (detail::read_bytes(in, row.data(), row.size()) != row.size()) {
      throw_error(ErrorKind::kParse,
                  fmt::format("EMB1: truncated at row {} of {}", r, count));
    }
    FeatureVector v = FeatureVector::zeros(table.dimension);
    for (std::size_t i = 0; i < table.dimension; ++i) {
      v.values[i] = detail::load_f32(row.data() + 4 * i);
      if (!std::isfinite(v.values[i])) {
        throw_error(ErrorKind::kParse,
                    fmt::format("EMB1: non-finite value at row {}, coordinate {}", r, i));
      }
    }
    table.rows.push_back(std::move(v));
  }
  return table;
}

EmbeddingTable read_emb1(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorKind::kIo, fmt::format("cannot open {}", path.string()));
  try {
    return read_emb1(in);
  } catch (const Error& e) {
    throw with_context(e, path.string());
  }
}

void write_emb1(const EmbeddingTable& table, std::ostream& out) {
  require_dimension(table.rows, table.dimension, "EMB1 rows");
  detail::ByteWriter w;
  w.put_raw(kMagic.data(), kMagic.size());
  w.put<std::uint16_t>(kEmbVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(table.dimension));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(table.rows.size()));
  for (const auto& row : table.rows) {
    for (const float v : row.values) w.put_f32(v);
  }
  detail::write_bytes(out, w.bytes().data(), w.bytes().size());
  if (!out) throw_error(ErrorKind::kIo, "EMB1: write failed");
}

void write_emb1(const EmbeddingTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_error(ErrorKind::kIo, fmt::format("cannot create {}", path.string()));
  write_emb1(table, out);
}

std::map<std::string, std::size_t, std::less<>> read_query_index(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorKind::kIo, fmt::format("cannot open {}", path.string()));
  std::map<std::string, std::size_t, std::less<>> index;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    index.emplace(line, row++);
  }
  return index;
}

void write_query_index(const std::vector<std::string>& queries,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw_error(ErrorKind::kIo, fmt::format("cannot create {}", path.string()));
  for (const auto& q : queries) {
    if (q.find('\n') != std::string::npos) {
      throw_error(ErrorKind::kInvalidArgument, "query index entries cannot contain newlines");
    }
    out << q << '\n';
  }
}

}  // namespace event_distill
