#include "ordersum/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

namespace ordersum {
namespace {

std::vector<std::size_t> iota(std::size_t k) {
  std::vector<std::size_t> out(k);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

std::uint64_t factorial(std::size_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

TEST(KeySentences, TopK) {
  const std::vector<double> probs{0.9, 0.1, 0.8};
  EXPECT_EQ(select_key_sentences(probs, 2), (std::vector<std::size_t>{0, 2}));
}

TEST(KeySentences, TiesToSmallerIndex) {
  const std::vector<double> equal{0.4, 0.4, 0.4};
  EXPECT_EQ(select_key_sentences(equal, 2), (std::vector<std::size_t>{0, 1}));
  const std::vector<double> partial{0.5, 0.5, 0.6};
  EXPECT_EQ(select_key_sentences(partial, 2), (std::vector<std::size_t>{0, 2}));
}

TEST(KeySentences, KLargerThanDocument) {
  const std::vector<double> probs{0.5, 0.2};
  EXPECT_THROW(select_key_sentences(probs, 3), std::exception);
}

TEST(Config, Validation) {
  EXPECT_NO_THROW((CandidateConfig{5, {2, 3}, CandidateMode::kPermutation}.validate()));
  EXPECT_THROW((CandidateConfig{3, {4}, CandidateMode::kPermutation}.validate()), std::exception);
  EXPECT_THROW((CandidateConfig{3, {0}, CandidateMode::kPermutation}.validate()), std::exception);
  EXPECT_THROW((CandidateConfig{3, {}, CandidateMode::kPermutation}.validate()), std::exception);
}

TEST(Generate, CountsForPresetConfigurations) {
  const auto key5 = iota(5), key8 = iota(8);
  EXPECT_EQ(generate({5, {2, 3}, CandidateMode::kCombination}, key5).size(), 20u);
  EXPECT_EQ(generate({5, {2, 3}, CandidateMode::kPermutation}, key5).size(), 80u);
  EXPECT_EQ(generate({5, {3, 4, 5}, CandidateMode::kPermutation}, key5).size(), 300u);
  EXPECT_EQ(generate({8, {6, 7}, CandidateMode::kPermutation}, key8).size(), 60480u);
}

TEST(Generate, CountsMatchClosedFormUpToEight) {
  for (std::size_t k = 1; k <= 8; ++k) {
    const auto key = iota(k);
    for (std::size_t r = 1; r <= k; ++r) {
      const std::uint64_t p = factorial(k) / factorial(k - r);
      const std::uint64_t c = p / factorial(r);
      EXPECT_EQ(count_permutations(k, r), p);
      EXPECT_EQ(count_combinations(k, r), c);
      if (k <= 7) {
        EXPECT_EQ(generate({k, {r}, CandidateMode::kPermutation}, key).size(), p);
        EXPECT_EQ(generate({k, {r}, CandidateMode::kCombination}, key).size(), c);
      }
    }
  }
}

TEST(Generate, EnumerationOrder) {
  const std::vector<std::size_t> key{1, 4, 6};
  const auto all = generate({3, {2}, CandidateMode::kPermutation}, key);
  const std::vector<std::vector<std::size_t>> expected{{1, 4}, {4, 1}, {1, 6},
                                                       {6, 1}, {4, 6}, {6, 4}};
  ASSERT_EQ(all.size(), expected.size());
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i].indices, expected[i]);
  EXPECT_EQ(all[0].kind, CandidateKind::kAnchor);
  EXPECT_EQ(all[1].kind, CandidateKind::kPermuted);
}

TEST(Generate, AnchorsOfPermutationModeEqualCombinationMode) {
  for (std::size_t k = 2; k <= 6; ++k) {
    const auto key = iota(k);
    std::vector<std::size_t> sizes;
    for (std::size_t r = 1; r <= std::min<std::size_t>(k, 4); ++r) sizes.push_back(r);
    const auto perm = generate({k, sizes, CandidateMode::kPermutation}, key);
    const auto comb = generate({k, sizes, CandidateMode::kCombination}, key);
    std::vector<CandidateSummary> anchors;
    for (const auto& c : perm) {
      const bool ascending = std::is_sorted(c.indices.begin(), c.indices.end());
      EXPECT_EQ(c.kind == CandidateKind::kAnchor, ascending);
      if (ascending) anchors.push_back(c);
    }
    EXPECT_EQ(anchors, comb);
    std::set<std::vector<std::size_t>> unique;
    for (const auto& c : perm) unique.insert(c.indices);
    EXPECT_EQ(unique.size(), perm.size());
  }
}

TEST(AnchorSample, SizesAndClamping) {
  const auto all = generate({5, {2, 3}, CandidateMode::kPermutation}, iota(5));
  EXPECT_EQ(anchor_sample(all, 1, 3).size(), 20u);
  EXPECT_EQ(anchor_sample(all, 2, 3).size(), 40u);
  EXPECT_EQ(anchor_sample(all, 8, 3).size(), 80u);
  for (const auto& c : anchor_sample(all, 1, 3)) EXPECT_EQ(c.kind, CandidateKind::kAnchor);
  EXPECT_THROW(anchor_sample(all, 0, 3), std::exception);
}

TEST(AnchorSample, DeterministicAndContainsAnchors) {
  const auto all = generate({5, {2, 3}, CandidateMode::kPermutation}, iota(5));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = anchor_sample(all, 2, seed);
    EXPECT_EQ(a, anchor_sample(all, 2, seed));
    std::size_t anchors = 0;
    for (const auto& c : a) anchors += c.kind == CandidateKind::kAnchor;
    EXPECT_EQ(anchors, 20u);
    std::set<std::vector<std::size_t>> unique;
    for (const auto& c : a) unique.insert(c.indices);
    EXPECT_EQ(unique.size(), a.size());
  }
  EXPECT_NE(anchor_sample(all, 2, 1), anchor_sample(all, 2, 2));
}

TEST(AnchorSample, UniformOverNonAnchors) {
  // 20 of the 60 non-anchors are drawn per seed, so each should appear in
  // about a third of the draws.
  const auto all = generate({5, {2, 3}, CandidateMode::kPermutation}, iota(5));
  std::map<std::vector<std::size_t>, int> hits;
  const int trials = 3000;
  for (int seed = 0; seed < trials; ++seed) {
    for (const auto& c : anchor_sample(all, 2, static_cast<std::uint64_t>(seed))) {
      if (c.kind == CandidateKind::kPermuted) ++hits[c.indices];
    }
  }
  EXPECT_EQ(hits.size(), 60u);
  const double expected = trials / 3.0;
  const double sd = std::sqrt(trials * (1.0 / 3.0) * (2.0 / 3.0));
  for (const auto& [indices, count] : hits) EXPECT_NEAR(count, expected, 5 * sd);
}

}  // namespace
}  // namespace ordersum
