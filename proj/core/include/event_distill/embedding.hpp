#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "event_distill/binning.hpp"
#include "event_distill/feature.hpp"

namespace event_distill {

struct HashProviderParams {
  std::size_t dimension = 64;
  std::uint64_t seed = 0;
};

/// Directory holding selector.emb (required), cluster.emb (optional, defaults
/// to the selector table), and queries.emb + queries.txt (optional).
struct FileProviderParams {
  std::filesystem::path directory;
};

struct HttpProviderParams {
  std::string base_url;
  std::size_t dimension = 64;
  std::chrono::milliseconds timeout{5000};
  std::size_t fan_out = 4;
};

/// Which embedding backend to use. Text form, as accepted by `--embedder`:
///   hash:DIM:SEED
///   file:DIRECTORY
///   http:URL[;dim=D][;timeout_ms=N][;fanout=N]
struct ProviderSpec {
  std::variant<HashProviderParams, FileProviderParams, HttpProviderParams> params;

  static ProviderSpec parse(std::string_view text);
  std::string to_string() const;
};

struct BinEmbeddings {
  std::vector<FeatureVector> selector;
  std::vector<FeatureVector> cluster;
};

/// Source of selector-space and cluster-space bin vectors plus query vectors.
/// Implementations are safe for concurrent calls.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::size_t selector_dimension() const = 0;
  virtual std::size_t cluster_dimension() const = 0;

  /// One vector per bin in each space, in input order. Bins may be any
  /// contiguous batch; implementations key on Bin::index where needed.
  virtual BinEmbeddings embed_bins(std::span<const Bin> bins) const = 0;

  /// Selector-space vector for the query text. Throws on empty text.
  virtual FeatureVector embed_query(std::string_view text) const = 0;

  /// Called once the full bin count is known; providers backed by a fixed
  /// table reject a count mismatch here.
  virtual void check_bin_count(std::size_t /*total_bins*/) const {}
};

std::unique_ptr<EmbeddingProvider> make_provider(const ProviderSpec& spec);

/// Embeds a complete bin sequence and checks the provider's bin count.
BinEmbeddings embed_bins(std::span<const Bin> bins, const EmbeddingProvider& provider);
FeatureVector embed_query(std::string_view text, const EmbeddingProvider& provider);

class HashProvider final : public EmbeddingProvider {
 public:
  explicit HashProvider(HashProviderParams params);

  std::size_t selector_dimension() const override { return params_.dimension; }
  std::size_t cluster_dimension() const override { return params_.dimension; }
  BinEmbeddings embed_bins(std::span<const Bin> bins) const override;
  FeatureVector embed_query(std::string_view text) const override;

  std::uint64_t selector_seed() const noexcept { return params_.seed; }
  std::uint64_t cluster_seed() const noexcept;

 private:
  HashProviderParams params_;
};

class FileProvider final : public EmbeddingProvider {
 public:
  explicit FileProvider(FileProviderParams params);

  std::size_t selector_dimension() const override { return selector_dim_; }
  std::size_t cluster_dimension() const override { return cluster_dim_; }
  BinEmbeddings embed_bins(std::span<const Bin> bins) const override;
  FeatureVector embed_query(std::string_view text) const override;
  void check_bin_count(std::size_t total_bins) const override;

  std::size_t row_count() const noexcept { return selector_.size(); }

 private:
  std::size_t selector_dim_ = 0;
  std::size_t cluster_dim_ = 0;
  std::vector<FeatureVector> selector_;
  std::vector<FeatureVector> cluster_;
  std::vector<FeatureVector> queries_;
  std::vector<std::pair<std::string, std::size_t>> query_rows_;
};

/// POST {base}/embed with {"kind","dimension","payload"}; expects
/// {"vector":[...]} of exactly `dimension` floats. Bin payloads are the
/// base64 EVS1 record bytes. The same vector serves both spaces.
class HttpProvider final : public EmbeddingProvider {
 public:
  explicit HttpProvider(HttpProviderParams params);

  std::size_t selector_dimension() const override { return params_.dimension; }
  std::size_t cluster_dimension() const override { return params_.dimension; }
  BinEmbeddings embed_bins(std::span<const Bin> bins) const override;
  FeatureVector embed_query(std::string_view text) const override;

 private:
  FeatureVector request(std::string_view kind, const std::string& payload,
                        const std::string& context) const;

  HttpProviderParams params_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

/// Raw EVS1 record bytes of a bin's events.
std::vector<std::byte> bin_record_bytes(const Bin& bin);

}  // namespace event_distill
