#include "event_distill/embedding.hpp"

#include <array>
#include <charconv>

#include <fmt/format.h>

#include "event_distill/error.hpp"
#include "event_distill/evbin.hpp"

namespace event_distill {
namespace {

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw_error(ErrorKind::kConfig, fmt::format("embedder: invalid {} '{}'", what, text));
  }
  return value;
}

ProviderSpec parse_hash(std::string_view rest) {
  HashProviderParams p;
  if (!rest.empty()) {
    const auto colon = rest.find(':');
    p.dimension = parse_number<std::size_t>(rest.substr(0, colon), "dimension");
    if (colon != std::string_view::npos) {
      p.seed = parse_number<std::uint64_t>(rest.substr(colon + 1), "seed");
    }
  }
  if (p.dimension == 0) throw_error(ErrorKind::kConfig, "embedder: hash dimension must be >= 1");
  return ProviderSpec{p};
}

ProviderSpec parse_http(std::string_view rest) {
  HttpProviderParams p;
  const auto first = rest.find(';');
  p.base_url = std::string(rest.substr(0, first));
  if (p.base_url.empty()) throw_error(ErrorKind::kConfig, "embedder: http URL is empty");
  auto options = first == std::string_view::npos ? std::string_view{} : rest.substr(first + 1);
  while (!options.empty()) {
    const auto semi = options.find(';');
    const auto item = options.substr(0, semi);
    options = semi == std::string_view::npos ? std::string_view{} : options.substr(semi + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw_error(ErrorKind::kConfig, fmt::format("embedder: bad http option '{}'", item));
    }
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    if (key == "dim") {
      p.dimension = parse_number<std::size_t>(value, "dimension");
    } else if (key == "timeout_ms") {
      p.timeout = std::chrono::milliseconds(parse_number<std::int64_t>(value, "timeout"));
    } else if (key == "fanout") {
      p.fan_out = parse_number<std::size_t>(value, "fanout");
    } else {
      throw_error(ErrorKind::kConfig, fmt::format("embedder: unknown http option '{}'", key));
    }
  }
  if (p.dimension == 0 || p.fan_out == 0 || p.timeout.count() <= 0) {
    throw_error(ErrorKind::kConfig, "embedder: http dim, fanout and timeout_ms must be positive");
  }
  return ProviderSpec{p};
}

}  // namespace

ProviderSpec ProviderSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const auto kind = text.substr(0, colon);
  const auto rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (kind == "hash") return parse_hash(rest);
  if (kind == "file") {
    if (rest.empty()) throw_error(ErrorKind::kConfig, "embedder: file provider needs a path");
    return ProviderSpec{FileProviderParams{std::filesystem::path(rest)}};
  }
  if (kind == "http") return parse_http(rest);
  throw_error(ErrorKind::kConfig,
              fmt::format("embedder: unknown kind '{}' (expected hash, file or http)", kind));
}

std::string ProviderSpec::to_string() const {
  struct Visitor {
    std::string operator()(const HashProviderParams& p) const {
      return fmt::format("hash:{}:{}", p.dimension, p.seed);
    }
    std::string operator()(const FileProviderParams& p) const {
      return "file:" + p.directory.string();
    }
    std::string operator()(const HttpProviderParams& p) const {
      return fmt::format("http:{};dim={};timeout_ms={};fanout={}", p.base_url, p.dimension,
                         p.timeout.count(), p.fan_out);
    }
  };
  return std::visit(Visitor{}, params);
}

std::unique_ptr<EmbeddingProvider> make_provider(const ProviderSpec& spec) {
  struct Visitor {
    std::unique_ptr<EmbeddingProvider> operator()(const HashProviderParams& p) const {
      return std::make_unique<HashProvider>(p);
    }
    std::unique_ptr<EmbeddingProvider> operator()(const FileProviderParams& p) const {
      return std::make_unique<FileProvider>(p);
    }
    std::unique_ptr<EmbeddingProvider> operator()(const HttpProviderParams& p) const {
      return std::make_unique<HttpProvider>(p);
    }
  };
  return std::visit(Visitor{}, spec.params);
}

BinEmbeddings embed_bins(std::span<const Bin> bins, const EmbeddingProvider& provider) {
  if (bins.empty()) throw_error(ErrorKind::kInvalidArgument, "no bins to embed");
  auto out = provider.embed_bins(bins);
  provider.check_bin_count(bins.size());
  return out;
}

FeatureVector embed_query(std::string_view text, const EmbeddingProvider& provider) {
  return provider.embed_query(text);
}

std::vector<std::byte> bin_record_bytes(const Bin& bin) {
  std::vector<std::byte> bytes(bin.events.size() * kEvbinRecordSize);
  for (std::size_t i = 0; i < bin.events.size(); ++i) {
    encode_evbin_record(bin.events[i], std::span<std::byte, kEvbinRecordSize>(
                                           bytes.data() + i * kEvbinRecordSize,
                                           kEvbinRecordSize));
  }
  return bytes;
}

}  // namespace event_distill
