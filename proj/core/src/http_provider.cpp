#include <json.hpp>

#include <fmt/format.h>
#include <httplib.h>

#include "event_distill/embedding.hpp"
#include "event_distill/error.hpp"
#include "event_distill/parallel.hpp"

namespace event_distill {
namespace {

std::string base64(std::span<const std::byte> bytes) {
  return httplib::detail::base64_encode(
      std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace

HttpProvider::HttpProvider(HttpProviderParams params) : params_(std::move(params)) {
  const auto& url = params_.base_url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw_error(ErrorKind::kConfig, fmt::format("http provider: URL '{}' lacks a scheme", url));
  }
  const auto path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? std::string{} : url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  if (params_.dimension == 0 || params_.fan_out == 0) {
    throw_error(ErrorKind::kConfig, "http provider: dimension and fan-out must be >= 1");
  }
}

FeatureVector HttpProvider::request(std::string_view kind, const std::string& payload,
                                    const std::string& context) const {
  auto fail = [&](const std::string& what) {
    throw_error(ErrorKind::kProvider, fmt::format("http provider ({}): {}", context, what));
  };

  httplib::Client client(scheme_host_port_);
  const auto ms = params_.timeout.count();
  client.set_connection_timeout(ms / 1000, (ms % 1000) * 1000);
  client.set_read_timeout(ms / 1000, (ms % 1000) * 1000);
  client.set_write_timeout(ms / 1000, (ms % 1000) * 1000);

  const nlohmann::json body = {
      {"kind", kind}, {"dimension", params_.dimension}, {"payload", payload}};
  auto res = client.Post(path_prefix_ + "/embed", body.dump(), "application/json");
  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout) {
      fail(fmt::format("timeout or read failure ({})", httplib::to_string(err)));
    }
    fail(fmt::format("transport failure ({})", httplib::to_string(err)));
  }
  if (res->status != 200) fail(fmt::format("HTTP status {}", res->status));

  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    fail(fmt::format("malformed response body: {}", e.what()));
  }
  if (!reply.is_object() || !reply.contains("vector") || !reply["vector"].is_array()) {
    fail("malformed response body: missing 'vector' array");
  }
  const auto& arr = reply["vector"];
  if (arr.size() != params_.dimension) {
    fail(fmt::format("vector has {} values, expected {}", arr.size(), params_.dimension));
  }
  FeatureVector v = FeatureVector::zeros(params_.dimension);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) fail(fmt::format("vector[{}] is not a number", i));
    v.values[i] = arr[i].get<float>();
  }
  try {
    require_finite(v, "response vector");
  } catch (const Error& e) {
    fail(e.what());
  }
  return v;
}

BinEmbeddings HttpProvider::embed_bins(std::span<const Bin> bins) const {
  std::vector<FeatureVector> vectors(bins.size());
  parallel_for(bins.size(), params_.fan_out, [&](std::size_t i) {
    const auto bytes = bin_record_bytes(bins[i]);
    vectors[i] = request("bin", base64(bytes), fmt::format("bin {}", bins[i].index));
  });
  BinEmbeddings out;
  out.selector = vectors;
  out.cluster = std::move(vectors);
  return out;
}

FeatureVector HttpProvider::embed_query(std::string_view text) const {
  if (text.empty()) throw_error(ErrorKind::kConfig, "query text is empty");
  return request("text", std::string(text), "query");
}

}  // namespace event_distill
