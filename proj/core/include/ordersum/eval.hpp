#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ordersum/corpus.hpp"
#include "ordersum/reranker.hpp"
#include "ordersum/trainer.hpp"

namespace ordersum {

/// Mean f1 of each metric over `count` documents.
struct EvalRow {
  std::string system;
  double r1 = 0.0;
  double r2 = 0.0;
  double rl_full = 0.0;
  double rl_norm = 0.0;
  std::size_t count = 0;
};

EvalRow evaluate(std::string system, std::span<const SummaryResult> outputs,
                 const DatasetSplit& split, bool stemming = false);

/// Spearman rank correlation between two orderings of the same index set.
double spearman(std::span<const std::size_t> order_a, std::span<const std::size_t> order_b);

struct CorrelationReport {
  /// Absent when no document has at least two summary sentences.
  std::optional<double> rho;
  std::vector<double> per_document_rhos;
  std::size_t count = 0;
  std::size_t excluded = 0;
};

struct OrderAnalysis {
  double rl_model = 0.0;
  double rl_ext = 0.0;
  CorrelationReport correlation;
};

using ProbabilityMap = std::map<std::string, std::vector<double>, std::less<>>;

/// Compares the model's sentence order against the extractor-probability
/// order of the same sentences.
OrderAnalysis analyze_order(std::span<const SummaryResult> outputs, const ProbabilityMap& probs,
                            const DatasetSplit& split, bool stemming = false);

/// CSV with header `step,r1,r2,rl_full`, one row per validation point.
void emit_curves(const TrainState& state, std::ostream& out);
void emit_curves(const TrainState& state, const std::string& path);
std::vector<ValidationRecord> read_curves(std::istream& in);

/// Line chart of the three validation series.
void write_curves_svg(const TrainState& state, std::ostream& out);

std::string eval_report_json(std::span<const EvalRow> rows,
                             const std::optional<OrderAnalysis>& analysis = std::nullopt);
std::vector<EvalRow> parse_eval_report(const std::string& text);

}  // namespace ordersum
