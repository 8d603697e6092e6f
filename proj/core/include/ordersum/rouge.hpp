#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ordersum {

/// Normalized tokens: lowercase ASCII alphanumerics, never empty strings.
using TokenSequence = std::vector<std::string>;

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static RougeScore from_counts(double matches, double candidate_total,
                                double reference_total);
};

struct RougeReport {
  RougeScore r1;
  RougeScore r2;
  RougeScore rl_full;
  RougeScore rl_norm;
};

/// Lowercases, maps every non-alphanumeric byte to a space, and splits on
/// whitespace. With `stemming`, tokens longer than three characters go
/// through the Porter stemmer.
TokenSequence normalize(std::string_view text, bool stemming = false);

std::vector<TokenSequence> normalize_all(std::span<const std::string> sentences,
                                         bool stemming = false);

/// Joins sentence token lists into one sequence, in order.
TokenSequence flatten(std::span<const TokenSequence> sentences);

/// Clipped n-gram overlap. Supports n in {1, 2}.
RougeScore rouge_n(const TokenSequence& reference, const TokenSequence& candidate, int n);

template <typename T>
std::size_t lcs_length(std::span<const T> a, std::span<const T> b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> curr(b.size() + 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      curr[j + 1] = a[i] == b[j] ? prev[j] + 1 : std::max(prev[j + 1], curr[j]);
    }
    std::swap(prev, curr);
  }
  return prev[b.size()];
}

std::size_t lcs_length(const TokenSequence& a, const TokenSequence& b);

/// ROUGE-L over each summary flattened into a single token sequence.
/// Sensitive to sentence order.
RougeScore rouge_l_full(std::span<const TokenSequence> reference,
                        std::span<const TokenSequence> candidate);

/// ROUGE-L from the sum, over reference sentences, of the best pairwise LCS
/// against any candidate sentence. Blind to sentence order.
RougeScore rouge_l_norm(std::span<const TokenSequence> reference,
                        std::span<const TokenSequence> candidate);

RougeReport rouge_report(std::span<const TokenSequence> reference,
                         std::span<const TokenSequence> candidate);

/// Porter (1980) stemmer over a lowercase ASCII word.
std::string porter_stem(std::string_view word);

}  // namespace ordersum
