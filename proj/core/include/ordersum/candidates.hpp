#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ordersum {

enum class CandidateKind { kAnchor, kPermuted };
enum class CandidateMode { kCombination, kPermutation };

/// An ordered list of distinct sentence indices. Anchors are exactly the
/// candidates whose indices ascend (document order).
struct CandidateSummary {
  std::vector<std::size_t> indices;
  CandidateKind kind = CandidateKind::kAnchor;

  std::size_t size() const { return indices.size(); }
  friend bool operator==(const CandidateSummary&, const CandidateSummary&) = default;
};

CandidateSummary make_candidate(std::vector<std::size_t> indices);

struct CandidateConfig {
  std::size_t k = 5;
  std::vector<std::size_t> sizes{2, 3};
  CandidateMode mode = CandidateMode::kPermutation;

  /// Throws unless every size lies in [1, k].
  void validate() const;
};

std::uint64_t count_combinations(std::size_t k, std::size_t r);
std::uint64_t count_permutations(std::size_t k, std::size_t r);
std::uint64_t expected_candidate_count(const CandidateConfig& config);

/// Indices of the k largest probabilities (ties to the smaller index),
/// returned in document order.
std::vector<std::size_t> select_key_sentences(std::span<const double> probs, std::size_t k);

/// Enumerates candidates from the key sentences. For each size (ascending),
/// subsets come in lexicographic order; in permutation mode each subset is
/// followed by its orderings in lexicographic order, the first of which is
/// the anchor.
std::vector<CandidateSummary> generate(const CandidateConfig& config,
                                       std::span<const std::size_t> key);

/// All anchors plus |anchors| * (factor - 1) non-anchors drawn uniformly
/// without replacement (all non-anchors when fewer exist). Output keeps the
/// input enumeration order.
std::vector<CandidateSummary> anchor_sample(std::span<const CandidateSummary> all,
                                            std::size_t factor, std::uint64_t seed);

}  // namespace ordersum
