#include "event_distill/feature.hpp"

#include <cmath>

#include <fmt/format.h>

#include "event_distill/error.hpp"

namespace event_distill {

bool FeatureVector::is_zero() const noexcept {
  for (const float v : values) {
    if (v != 0.0f) return false;
  }
  return true;
}

void require_finite(const FeatureVector& v, const char* what) {
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    if (!std::isfinite(v.values[i])) {
      throw_error(ErrorKind::kInvalidArgument,
                  fmt::format("{}: non-finite value at coordinate {}", what, i));
    }
  }
}

void require_dimension(std::span<const FeatureVector> vectors, std::size_t dimension,
                       const char* what) {
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].dimension() != dimension) {
      throw_error(ErrorKind::kInvalidArgument,
                  fmt::format("{}: vector {} has dimension {}, expected {}", what, i,
                              vectors[i].dimension(), dimension));
    }
  }
}

void BinFeatureSequence::validate() const {
  if (selector.size() != cluster.size()) {
    throw_error(ErrorKind::kInvalidArgument,
                fmt::format("selector/cluster length mismatch: {} vs {}", selector.size(),
                            cluster.size()));
  }
  require_dimension(selector, query.dimension(), "selector features");
  if (!cluster.empty()) require_dimension(cluster, cluster.front().dimension(), "cluster features");
}

}  // namespace event_distill
