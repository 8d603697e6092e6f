#include "ordersum/candidates.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "ordersum/error.hpp"

namespace ordersum {

CandidateSummary make_candidate(std::vector<std::size_t> indices) {
  CandidateSummary candidate;
  candidate.kind = std::is_sorted(indices.begin(), indices.end()) ? CandidateKind::kAnchor
                                                                   : CandidateKind::kPermuted;
  candidate.indices = std::move(indices);
  return candidate;
}

void CandidateConfig::validate() const {
  if (k == 0) throw Error("candidate config: k must be at least 1");
  if (sizes.empty()) throw Error("candidate config: sizes must not be empty");
  for (std::size_t r : sizes) {
    if (r < 1 || r > k) {
      throw Error("candidate config: size " + std::to_string(r) + " outside [1, " +
                  std::to_string(k) + "]");
    }
  }
}

std::uint64_t count_combinations(std::size_t k, std::size_t r) {
  if (r > k) return 0;
  std::uint64_t result = 1;
  for (std::size_t i = 1; i <= r; ++i) result = result * (k - r + i) / i;
  return result;
}

std::uint64_t count_permutations(std::size_t k, std::size_t r) {
  if (r > k) return 0;
  std::uint64_t result = 1;
  for (std::size_t i = 0; i < r; ++i) result *= k - i;
  return result;
}

std::uint64_t expected_candidate_count(const CandidateConfig& config) {
  std::uint64_t total = 0;
  for (std::size_t r : config.sizes) {
    total += config.mode == CandidateMode::kCombination ? count_combinations(config.k, r)
                                                        : count_permutations(config.k, r);
  }
  return total;
}

std::vector<std::size_t> select_key_sentences(std::span<const double> probs, std::size_t k) {
  if (k > probs.size()) {
    throw Error("cannot select " + std::to_string(k) + " key sentences from " +
                std::to_string(probs.size()));
  }
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<CandidateSummary> generate(const CandidateConfig& config,
                                       std::span<const std::size_t> key) {
  config.validate();
  if (key.size() != config.k) {
    throw Error("expected " + std::to_string(config.k) + " key sentences, got " +
                std::to_string(key.size()));
  }
  std::vector<std::size_t> sorted_key(key.begin(), key.end());
  std::sort(sorted_key.begin(), sorted_key.end());

  std::vector<std::size_t> sizes = config.sizes;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  std::vector<CandidateSummary> out;
  out.reserve(expected_candidate_count(config));
  for (std::size_t r : sizes) {
    // Lexicographic r-subsets of positions 0..k-1.
    std::vector<std::size_t> positions(r);
    std::iota(positions.begin(), positions.end(), 0);
    while (true) {
      std::vector<std::size_t> subset(r);
      for (std::size_t i = 0; i < r; ++i) subset[i] = sorted_key[positions[i]];
      if (config.mode == CandidateMode::kCombination) {
        out.push_back({subset, CandidateKind::kAnchor});
      } else {
        do {
          out.push_back(make_candidate(subset));
        } while (std::next_permutation(subset.begin(), subset.end()));
      }
      std::size_t i = r;
      while (i > 0 && positions[i - 1] == config.k - r + i - 1) --i;
      if (i == 0) break;
      ++positions[i - 1];
      for (std::size_t j = i; j < r; ++j) positions[j] = positions[j - 1] + 1;
    }
  }
  return out;
}

std::vector<CandidateSummary> anchor_sample(std::span<const CandidateSummary> all,
                                            std::size_t factor, std::uint64_t seed) {
  if (factor == 0) throw Error("anchor sampling factor must be at least 1");
  std::vector<std::size_t> anchors;
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < all.size(); ++i) {
    (all[i].kind == CandidateKind::kAnchor ? anchors : others).push_back(i);
  }
  const std::size_t wanted = std::min(others.size(), anchors.size() * (factor - 1));

  // Partial Fisher-Yates with an explicit engine so draws match across platforms.
  std::mt19937_64 engine(seed);
  for (std::size_t i = 0; i < wanted; ++i) {
    const std::size_t span = others.size() - i;
    const std::size_t pick = i + static_cast<std::size_t>(engine() % span);
    std::swap(others[i], others[pick]);
  }
  std::vector<std::size_t> keep = anchors;
  keep.insert(keep.end(), others.begin(), others.begin() + static_cast<std::ptrdiff_t>(wanted));
  std::sort(keep.begin(), keep.end());

  std::vector<CandidateSummary> out;
  out.reserve(keep.size());
  for (std::size_t i : keep) out.push_back(all[i]);
  return out;
}

}  // namespace ordersum
