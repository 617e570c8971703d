#include "event_distill/similarity.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "event_distill/error.hpp"

namespace event_distill {

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    throw_error(ErrorKind::kInvalidArgument,
                fmt::format("cosine similarity: dimension mismatch {} vs {}", a.size(), b.size()));
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) return (na == 0.0 && nb == 0.0) ? 1.0 : 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double cosine_similarity(const FeatureVector& a, const FeatureVector& b) {
  return cosine_similarity(a.view(), b.view());
}

UnitVectors::UnitVectors(std::span<const FeatureVector> vectors) {
  dimension_ = vectors.empty() ? 0 : vectors.front().dimension();
  require_dimension(vectors, dimension_, "window vectors");
  data_.resize(vectors.size() * dimension_);
  zero_.resize(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    double norm2 = 0.0;
    for (const float v : vectors[i].values) norm2 += static_cast<double>(v) * v;
    zero_[i] = norm2 == 0.0;
    const double inv = zero_[i] ? 0.0 : 1.0 / std::sqrt(norm2);
    for (std::size_t d = 0; d < dimension_; ++d) {
      data_[i * dimension_ + d] = vectors[i].values[d] * inv;
    }
  }
}

double UnitVectors::similarity(std::size_t i, std::size_t j) const noexcept {
  if (zero_[i] || zero_[j]) return (zero_[i] && zero_[j]) ? 1.0 : 0.0;
  const double* a = data_.data() + i * dimension_;
  const double* b = data_.data() + j * dimension_;
  double dot = 0.0;
  for (std::size_t d = 0; d < dimension_; ++d) dot += a[d] * b[d];
  return std::clamp(dot, -1.0, 1.0);
}

}  // namespace event_distill
