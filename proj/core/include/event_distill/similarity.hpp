#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "event_distill/feature.hpp"

namespace event_distill {

/// <a,b> / (|a||b|), clamped to [-1, 1]. A zero vector has similarity 0 with
/// any nonzero vector and 1 with another zero vector. Throws kInvalidArgument
/// on a dimension mismatch.
double cosine_similarity(std::span<const float> a, std::span<const float> b);
double cosine_similarity(const FeatureVector& a, const FeatureVector& b);

/// l2-normalized copies of a vector set, in double precision, with pairwise
/// similarity under the same zero-vector rules as cosine_similarity.
class UnitVectors {
 public:
  explicit UnitVectors(std::span<const FeatureVector> vectors);

  std::size_t size() const noexcept { return zero_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }
  double similarity(std::size_t i, std::size_t j) const noexcept;
  double distance(std::size_t i, std::size_t j) const noexcept {
    return 1.0 - similarity(i, j);
  }

 private:
  std::size_t dimension_ = 0;
  std::vector<double> data_;
  std::vector<bool> zero_;
};

}  // namespace event_distill
