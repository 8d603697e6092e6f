#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "ordersum/corpus.hpp"

namespace ordersum {

inline constexpr std::size_t kDefaultPermutationCap = 8;

/// Extractive supervision for one document.
///
/// `selected` is in document order, `ordered` is the same set permuted to
/// maximize ROUGE-L (full) against the reference, and `y[i] == 1` exactly
/// for the selected sentences.
struct OracleLabel {
  std::string document_id;
  std::vector<std::size_t> selected;
  std::vector<std::size_t> ordered;
  std::vector<int> y;
};

/// Greedy ROUGE-1 + ROUGE-2 f1 selection. Stops when no remaining sentence
/// strictly improves the objective or `max_sentences` are chosen; ties go to
/// the smallest index. `ordered` is left equal to `selected`.
OracleLabel greedy_oracle(const Document& doc, std::size_t max_sentences,
                          bool stemming = false);

/// Permutation of `selected` with the highest ROUGE-L (full) f1, ties to the
/// lexicographically smallest index sequence. Throws when the selection is
/// larger than `permutation_cap`.
std::vector<std::size_t> order_oracle(const Document& doc,
                                      const std::vector<std::size_t>& selected,
                                      std::size_t permutation_cap = kDefaultPermutationCap,
                                      bool stemming = false);

/// Greedy selection followed by order optimization.
OracleLabel ordered_oracle(const Document& doc, std::size_t max_sentences,
                           std::size_t permutation_cap = kDefaultPermutationCap,
                           bool stemming = false);

std::vector<std::size_t> lead(const Document& doc, std::size_t count);

void write_labels_jsonl(const std::vector<OracleLabel>& labels, std::ostream& out);
std::vector<OracleLabel> read_labels_jsonl(const std::string& path);
std::vector<OracleLabel> read_labels_jsonl(std::istream& in);

}  // namespace ordersum
