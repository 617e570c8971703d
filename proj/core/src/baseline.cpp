#include <algorithm>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "event_distill/compress.hpp"
#include "event_distill/error.hpp"
#include "wide_math.hpp"

namespace event_distill {

BaselineMode parse_baseline_mode(std::string_view text) {
  if (text == "random") return BaselineMode::kRandom;
  if (text == "interval") return BaselineMode::kInterval;
  throw_error(ErrorKind::kConfig,
              fmt::format("unknown baseline '{}' (expected random or interval)", text));
}

const char* to_string(BaselineMode mode) noexcept {
  return mode == BaselineMode::kRandom ? "random" : "interval";
}

BaselineResult sample_baseline(const FilteredSequence& filtered, BaselineMode mode,
                               std::size_t budget, std::uint64_t seed) {
  if (budget < 1) throw_error(ErrorKind::kConfig, "baseline budget must be >= 1");
  const std::size_t k = filtered.size();
  if (k == 0) throw_error(ErrorKind::kInvalidArgument, "baseline: filtered sequence is empty");

  BaselineResult result;
  result.budget_exceeded = budget > k;
  const std::size_t take = std::min(budget, k);

  std::vector<std::size_t> positions;
  if (mode == BaselineMode::kInterval || take == k) {
    positions.resize(take);
    for (std::size_t j = 0; j < take; ++j) positions[j] = j * k / take;
  } else {
    // Partial Fisher-Yates with an explicit draw so results do not depend on
    // the standard library's distribution implementations.
    std::vector<std::size_t> pool(k);
    std::iota(pool.begin(), pool.end(), 0);
    std::mt19937_64 rng(seed);
    for (std::size_t j = 0; j < take; ++j) {
      const auto span = static_cast<std::uint64_t>(k - j);
      const auto pick = j + static_cast<std::size_t>(detail::mul_hi(rng(), span));
      std::swap(pool[j], pool[pick]);
    }
    positions.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
    std::sort(positions.begin(), positions.end());
  }

  auto& seq = result.sequence;
  seq.dimension = filtered.features.front().dimension();
  for (std::size_t j = 0; j < positions.size(); ++j) {
    const auto pos = positions[j];
    Token token;
    token.window = static_cast<std::uint32_t>(j);
    token.cluster = 0;
    token.bins = {static_cast<std::uint32_t>(filtered.kept_indices[pos])};
    token.range = pos < filtered.ranges.size() ? filtered.ranges[pos] : TimeRange{};
    token.vector = filtered.features[pos];
    seq.tokens.push_back(std::move(token));
  }
  return result;
}

}  // namespace event_distill
