#include <fmt/format.h>

#include "event_distill/emb_file.hpp"
#include "event_distill/embedding.hpp"
#include "event_distill/error.hpp"

namespace event_distill {
namespace {

EmbeddingTable load_table(const std::filesystem::path& path) {
  try {
    return read_emb1(path);
  } catch (const Error& e) {
    throw Error(ErrorKind::kProvider, fmt::format("file provider: {}", e.what()));
  }
}

}  // namespace

FileProvider::FileProvider(FileProviderParams params) {
  const auto& dir = params.directory;
  const auto selector_path = dir / "selector.emb";
  if (!std::filesystem::exists(selector_path)) {
    throw_error(ErrorKind::kProvider,
                fmt::format("file provider: {} not found", selector_path.string()));
  }
  auto selector = load_table(selector_path);
  selector_dim_ = selector.dimension;
  selector_ = std::move(selector.rows);

  const auto cluster_path = dir / "cluster.emb";
  if (std::filesystem::exists(cluster_path)) {
    auto cluster = load_table(cluster_path);
    cluster_dim_ = cluster.dimension;
    cluster_ = std::move(cluster.rows);
    if (cluster_.size() != selector_.size()) {
      throw_error(ErrorKind::kProvider,
                  fmt::format("file provider: cluster.emb holds {} vectors, selector.emb {}",
                              cluster_.size(), selector_.size()));
    }
  } else {
    cluster_dim_ = selector_dim_;
    cluster_ = selector_;
  }

  const auto queries_path = dir / "queries.emb";
  const auto index_path = dir / "queries.txt";
  if (std::filesystem::exists(queries_path) && std::filesystem::exists(index_path)) {
    auto queries = load_table(queries_path);
    if (!queries.rows.empty() && queries.dimension != selector_dim_) {
      throw_error(ErrorKind::kProvider,
                  fmt::format("file provider: query dimension {} != selector dimension {}",
                              queries.dimension, selector_dim_));
    }
    queries_ = std::move(queries.rows);
    for (auto& [text, row] : read_query_index(index_path)) {
      if (row >= queries_.size()) {
        throw_error(ErrorKind::kProvider,
                    fmt::format("file provider: query index row {} beyond table of {}", row,
                                queries_.size()));
      }
      query_rows_.emplace_back(text, row);
    }
  }
}

BinEmbeddings FileProvider::embed_bins(std::span<const Bin> bins) const {
  BinEmbeddings out;
  out.selector.reserve(bins.size());
  out.cluster.reserve(bins.size());
  for (const auto& bin : bins) {
    if (bin.index >= selector_.size()) {
      throw_error(ErrorKind::kProvider,
                  fmt::format("file provider: bin {} has no embedding (file holds {} vectors)",
                              bin.index, selector_.size()));
    }
    out.selector.push_back(selector_[bin.index]);
    out.cluster.push_back(cluster_[bin.index]);
  }
  return out;
}

void FileProvider::check_bin_count(std::size_t total_bins) const {
  if (total_bins != selector_.size()) {
    throw_error(ErrorKind::kProvider,
                fmt::format("file provider: count mismatch, file holds {} vectors for {} bins",
                            selector_.size(), total_bins));
  }
}

FeatureVector FileProvider::embed_query(std::string_view text) const {
  if (text.empty()) throw_error(ErrorKind::kConfig, "query text is empty");
  for (const auto& [key, row] : query_rows_) {
    if (key == text) return queries_[row];
  }
  throw_error(ErrorKind::kProvider,
              fmt::format("file provider: query '{}' not found in query index", text));
}

}  // namespace event_distill
