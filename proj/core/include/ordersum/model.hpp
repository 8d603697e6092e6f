#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ordersum/candidates.hpp"
#include "ordersum/embedder.hpp"
#include "ordersum/rouge.hpp"

namespace ordersum {

inline constexpr double kProbEpsilon = 1e-7;

struct ModelHyper {
  /// Margin unit; the pair (j, k) of ranked positions uses lambda * (k - j).
  double lambda = 0.01;
  double lr0 = 1e-3;
  std::size_t warmup = 10000;
};

/// Trainable parameters in one flat buffer:
/// projection W (d x d, row-major), bias b (d), score head w (d), bias c.
class Parameters {
 public:
  Parameters() = default;
  explicit Parameters(std::size_t d);

  std::size_t d() const { return d_; }
  std::size_t size() const { return data_.size(); }

  double& W(std::size_t row, std::size_t col) { return data_[row * d_ + col]; }
  double W(std::size_t row, std::size_t col) const { return data_[row * d_ + col]; }
  std::span<double> W() { return {data_.data(), d_ * d_}; }
  std::span<const double> W() const { return {data_.data(), d_ * d_}; }
  std::span<double> b() { return {data_.data() + d_ * d_, d_}; }
  std::span<const double> b() const { return {data_.data() + d_ * d_, d_}; }
  std::span<double> w() { return {data_.data() + d_ * d_ + d_, d_}; }
  std::span<const double> w() const { return {data_.data() + d_ * d_ + d_, d_}; }
  double& c() { return data_.back(); }
  double c() const { return data_.back(); }

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }

  bool all_finite() const;
  friend bool operator==(const Parameters&, const Parameters&) = default;

 private:
  std::size_t d_ = 0;
  std::vector<double> data_;
};

struct RerankerModel {
  Parameters params;
  ModelHyper hyper;

  std::size_t d() const { return params.d(); }

  /// W = I, every other parameter zero.
  static RerankerModel identity(std::size_t d, ModelHyper hyper = {});
  /// W = I + scale * N(0, 1), w = scale * N(0, 1), b = 0, c = 0.
  static RerankerModel initialize(std::size_t d, std::uint64_t seed, double scale,
                                  ModelHyper hyper = {});
};

/// tanh(W v + b).
Vector project(const RerankerModel& model, std::span<const double> v);

struct ProjectedSet {
  std::vector<Vector> sentences;
  Vector doc;
};

ProjectedSet project_all(const RerankerModel& model, const EmbeddingSet& set);

/// sigmoid(w . z + c) for a projected sentence vector.
double sentence_prob(const RerankerModel& model, std::span<const double> z);

/// Inclusion probability of every sentence in the set.
std::vector<double> sentence_probs(const RerankerModel& model, const EmbeddingSet& set);

/// Mean binary cross-entropy with probabilities clamped to [eps, 1 - eps].
double loss_sent(std::span<const double> probs, std::span<const int> labels);

/// Candidates sorted by descending ranking score H; ties keep input order.
struct RankedCandidateSet {
  std::vector<CandidateSummary> candidates;
  std::vector<double> scores;
};

/// H = ROUGE-1 f1 + ROUGE-2 f1 + ROUGE-L (full) f1 of the candidate
/// sentences, taken in candidate order, against the reference.
double ranking_score(std::span<const TokenSequence> reference,
                     std::span<const TokenSequence> sentence_tokens,
                     const CandidateSummary& candidate);

RankedCandidateSet rank_h(std::span<const TokenSequence> reference,
                          std::span<const CandidateSummary> candidates,
                          std::span<const TokenSequence> sentence_tokens);

/// Triplet ranking loss over candidate vectors given in ranked order:
/// sum over j < k of max(0, cos(doc, C_k) - cos(doc, C_j) + lambda * (k - j)).
double loss_sum(std::span<const double> doc_vec, std::span<const Vector> candidate_vecs,
                double lambda);

/// One document's contribution to a batch. An empty `ranked` list means the
/// document contributes only the extraction loss.
struct TrainExample {
  const EmbeddingSet* embeddings = nullptr;
  std::vector<int> labels;
  std::vector<CandidateSummary> ranked;
};

struct LossAndGradient {
  double loss = 0.0;
  double loss_sent = 0.0;
  double loss_sum = 0.0;
  Parameters gradient;
};

/// Batch objective: the mean over examples of loss_sent + loss_sum.
double batch_loss(const RerankerModel& model, std::span<const TrainExample> batch);

/// Analytic gradient of batch_loss. Hinges exactly at zero and clamped
/// probabilities contribute zero gradient.
LossAndGradient grad(const RerankerModel& model, std::span<const TrainExample> batch);

/// lr0 * min(step^-0.5, step * warmup^-1.5) for step >= 1.
double lr_at(std::size_t step, double lr0, std::size_t warmup);

struct Checkpoint {
  RerankerModel model;
  std::size_t step = 0;
  /// Hash seed of the toy embedder used in training; absent when training
  /// read exported embeddings.
  std::optional<std::uint64_t> toy_seed;
};

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);
std::string checkpoint_to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(const std::string& text);

}  // namespace ordersum
