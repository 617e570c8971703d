#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace event_distill {

/// A fixed-dimension embedding. Values are finite 32-bit floats.
struct FeatureVector {
  std::vector<float> values;

  FeatureVector() = default;
  explicit FeatureVector(std::vector<float> v) : values(std::move(v)) {}
  FeatureVector(std::initializer_list<float> v) : values(v) {}

  static FeatureVector zeros(std::size_t dimension) {
    return FeatureVector(std::vector<float>(dimension, 0.0f));
  }

  std::size_t dimension() const noexcept { return values.size(); }
  std::span<const float> view() const noexcept { return values; }
  bool is_zero() const noexcept;

  bool operator==(const FeatureVector&) const = default;
};

/// Throws kInvalidArgument (or `kind` if given) if any value is NaN/Inf.
void require_finite(const FeatureVector& v, const char* what);

/// Throws if any vector's dimension differs from `dimension`.
void require_dimension(std::span<const FeatureVector> vectors,
                       std::size_t dimension, const char* what);

/// Selector features, cluster features and the query, aligned by bin.
struct BinFeatureSequence {
  std::vector<FeatureVector> selector;
  std::vector<FeatureVector> cluster;
  FeatureVector query;

  std::size_t bin_count() const noexcept { return selector.size(); }
  void validate() const;
};

}  // namespace event_distill
