#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "ordersum/corpus.hpp"

namespace ordersum {

/// Generator for an order-separable toy corpus.
///
/// Every sentence carries one role word (opening, development, or closing)
/// and filler words. A few sentences per document also carry salience words;
/// the reference lists exactly those sentences, sorted by role. Their
/// positions in the document are random, so document order matches the
/// reference order only by chance. Role words are spread evenly over
/// salient and filler sentences.
struct SyntheticConfig {
  std::size_t documents = 500;
  std::size_t min_sentences = 6;
  std::size_t max_sentences = 9;
  std::size_t min_summary = 2;
  std::size_t max_summary = 3;
  std::size_t min_filler = 5;
  std::size_t max_filler = 9;
  std::uint64_t seed = 7;
};

DatasetSplit make_synthetic_corpus(const SyntheticConfig& config, std::string name = "train");

}  // namespace ordersum
