#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "ordersum/candidates.hpp"
#include "ordersum/corpus.hpp"
#include "ordersum/embedder.hpp"
#include "ordersum/model.hpp"
#include "ordersum/oracle.hpp"

namespace ordersum {

struct TrainConfig {
  CandidateConfig candidates{5, {2, 3}, CandidateMode::kPermutation};
  /// Anchor sampling factor N.
  std::size_t factor = 2;
  double lambda = 0.01;
  double lr0_phase1 = 2e-3;
  double lr0_phase2 = 1e-3;
  std::size_t warmup = 10000;
  std::size_t phase1_steps = 1000;
  std::size_t phase2_steps = 1000;
  /// Documents per optimizer step (gradient accumulation).
  std::size_t batch_size = 32;
  /// Validate every this many global steps; 0 disables validation.
  std::size_t validation_interval = 1000;
  std::uint64_t seed = 0;
  bool stemming = false;
  double init_scale = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double weight_decay = 0.0;
};

struct ValidationRecord {
  std::size_t step = 0;
  int phase = 1;
  double r1 = 0.0;
  double r2 = 0.0;
  double rl_full = 0.0;
};

struct TrainState {
  std::size_t step = 0;
  int phase = 1;
  std::uint64_t seed = 0;
  std::vector<ValidationRecord> metrics_log;
};

struct TrainingInputs {
  const DatasetSplit* train = nullptr;
  /// Labels for the training documents, matched by document id.
  const std::vector<OracleLabel>* labels = nullptr;
  const EmbeddingMap* embeddings = nullptr;
  const DatasetSplit* valid = nullptr;
  const EmbeddingMap* valid_embeddings = nullptr;
};

struct TrainResult {
  RerankerModel model;
  /// Snapshot taken when phase 1 ends.
  RerankerModel phase1_model;
  TrainState state;
};

/// Adam with decoupled weight decay.
class AdamOptimizer {
 public:
  AdamOptimizer(std::size_t parameter_count, double beta1, double beta2, double epsilon,
                double weight_decay);

  void step(std::span<double> params, std::span<const double> gradient, double lr);
  std::size_t steps_taken() const { return t_; }

 private:
  double beta1_;
  double beta2_;
  double epsilon_;
  double weight_decay_;
  std::size_t t_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

/// Mean r1 / r2 / ROUGE-L (full) f1 of `model` summaries over a split.
ValidationRecord validate(const RerankerModel& model, const DatasetSplit& split,
                          const EmbeddingMap& embeddings, const CandidateConfig& config,
                          bool stemming);

/// Phase 1 minimizes the extraction loss only; phase 2 minimizes extraction
/// plus ranking loss over anchor-sampled, H-ranked permutation candidates.
/// Throws on a non-finite loss, naming the step.
TrainResult train(const TrainingInputs& inputs, const TrainConfig& config);
TrainResult train(const TrainingInputs& inputs, const TrainConfig& config,
                  RerankerModel initial);

}  // namespace ordersum
