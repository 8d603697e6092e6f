#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ordersum/candidates.hpp"
#include "ordersum/corpus.hpp"
#include "ordersum/embedder.hpp"
#include "ordersum/model.hpp"

namespace ordersum {

struct ScoredCandidate {
  CandidateSummary candidate;
  double similarity = 0.0;
};

struct SummaryResult {
  std::string document_id;
  CandidateSummary chosen;
  double similarity = 0.0;
  std::string text;
  std::vector<ScoredCandidate> all_scores;
};

/// Sentences at `indices` joined with single spaces, in the given order.
std::string join_sentences(const Document& doc, std::span<const std::size_t> indices);

/// A result for a fixed index list (baselines, oracles).
SummaryResult make_result(const Document& doc, std::vector<std::size_t> indices,
                          double similarity = 0.0);

/// Scores every candidate built from the top-k sentences by cosine against
/// the projected document vector and returns the best, ties to the earliest
/// enumerated candidate. Documents shorter than k use k' = n with sizes
/// above n dropped.
SummaryResult summarize(const Document& doc, const RerankerModel& model,
                        const EmbeddingSet& embeddings, const CandidateConfig& config,
                        bool keep_scores = false);

/// Same index set as `result.chosen`, sorted by descending probability
/// (ties to the smaller index).
CandidateSummary reorder_by_extractor(const SummaryResult& result, std::span<const double> probs);

void write_results_jsonl(std::span<const SummaryResult> results, std::ostream& out);
std::vector<SummaryResult> read_results_jsonl(const std::string& path, const DatasetSplit& split);

}  // namespace ordersum
