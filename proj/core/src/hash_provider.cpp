#include "event_distill/embedding.hpp"
#include "event_distill/error.hpp"
#include "event_distill/hashing.hpp"

namespace event_distill {
namespace {

constexpr std::uint64_t kClusterSeedSalt = 0x636c757374657273ULL;

}  // namespace

HashProvider::HashProvider(HashProviderParams params) : params_(params) {
  if (params_.dimension == 0) {
    throw_error(ErrorKind::kConfig, "hash provider dimension must be >= 1");
  }
}

std::uint64_t HashProvider::cluster_seed() const noexcept {
  return params_.seed ^ kClusterSeedSalt;
}

BinEmbeddings HashProvider::embed_bins(std::span<const Bin> bins) const {
  BinEmbeddings out;
  out.selector.reserve(bins.size());
  out.cluster.reserve(bins.size());
  for (const auto& bin : bins) {
    if (bin.empty()) {
      out.selector.push_back(FeatureVector::zeros(params_.dimension));
      out.cluster.push_back(FeatureVector::zeros(params_.dimension));
      continue;
    }
    const auto digest = hash_bin_records(bin);
    out.selector.push_back(expand_digest(digest, params_.dimension, selector_seed()));
    out.cluster.push_back(expand_digest(digest, params_.dimension, cluster_seed()));
  }
  return out;
}

FeatureVector HashProvider::embed_query(std::string_view text) const {
  if (text.empty()) throw_error(ErrorKind::kConfig, "query text is empty");
  return hash_embed(text, params_.dimension, selector_seed());
}

}  // namespace event_distill
