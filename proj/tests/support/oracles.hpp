#pragma once

// Reference implementations used as test oracles. Each one is written
// independently of the library code it checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ordersum/candidates.hpp"
#include "ordersum/embedder.hpp"
#include "ordersum/model.hpp"

namespace ordersum::testing {

// Three sentences from a news summary about a plane hit by lightning, and
// the six orderings of them.
inline const std::array<std::string, 3> kLightningSentences = {
    "The hole was at a point in the plane where weather radars are housed, but the plane "
    "landed safely in Denver and no one was injured.",
    "A plane was struck by lightning shortly after takeoff during a flight from Reykjavik, "
    "Iceland, to Denver, Colorado on Tuesday.",
    "It wasn’t until after landing that the passengers and crew found out the lightning "
    "strike caused a gaping hole at the nose of the plane.",
};

inline const std::array<std::array<std::size_t, 3>, 6> kSixOrders = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

/// LCS by enumerating every subsequence of the shorter input.
template <typename T>
std::size_t brute_force_lcs(const std::vector<T>& a, const std::vector<T>& b) {
  const std::vector<T>& small = a.size() <= b.size() ? a : b;
  const std::vector<T>& large = a.size() <= b.size() ? b : a;
  std::size_t best = 0;
  const std::uint32_t masks = 1u << small.size();
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    std::vector<T> sub;
    for (std::size_t i = 0; i < small.size(); ++i) {
      if (mask & (1u << i)) sub.push_back(small[i]);
    }
    std::size_t pos = 0;
    for (const auto& item : large) {
      if (pos < sub.size() && item == sub[pos]) ++pos;
    }
    if (pos == sub.size()) best = std::max(best, sub.size());
  }
  return best;
}

/// Pooling by scattering each intermediate entry into output bucket p / r.
inline std::vector<double> scatter_pool(const std::vector<double>& intermediate, std::size_t r,
                                        std::size_t d) {
  std::vector<double> out(d, 0.0);
  for (std::size_t p = 0; p < r * d; ++p) out[p / r] += intermediate[p] / static_cast<double>(r);
  return out;
}

/// Central finite differences of batch_loss with respect to every parameter.
inline std::vector<double> numeric_gradient(const RerankerModel& model,
                                            std::span<const TrainExample> batch, double h) {
  RerankerModel probe = model;
  std::vector<double> out(model.params.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double original = probe.params.flat()[i];
    probe.params.flat()[i] = original + h;
    const double up = batch_loss(probe, batch);
    probe.params.flat()[i] = original - h;
    const double down = batch_loss(probe, batch);
    probe.params.flat()[i] = original;
    out[i] = (up - down) / (2.0 * h);
  }
  return out;
}

/// A random small training problem: owned embeddings plus examples pointing
/// into them.
struct RandomProblem {
  RerankerModel model;
  std::vector<EmbeddingSet> sets;
  std::vector<TrainExample> batch;
};

inline RandomProblem random_problem(std::mt19937_64& rng, std::size_t max_d = 8,
                                    std::size_t max_candidates = 5) {
  std::normal_distribution<double> normal(0.0, 1.0);
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  RandomProblem problem;
  const std::size_t d = uniform(2, max_d);
  problem.model = RerankerModel::identity(d);
  for (auto& x : problem.model.params.flat()) x += 0.5 * normal(rng);

  const std::size_t documents = uniform(1, 2);
  problem.sets.resize(documents);
  for (std::size_t doc = 0; doc < documents; ++doc) {
    EmbeddingSet& set = problem.sets[doc];
    set.document_id = "doc" + std::to_string(doc);
    set.d = d;
    const std::size_t n = uniform(2, 5);
    for (std::size_t i = 0; i < n; ++i) {
      Vector v(d);
      for (auto& x : v) x = normal(rng);
      set.sentence_vectors.push_back(v);
    }
    set.doc_vector.resize(d);
    for (auto& x : set.doc_vector) x = normal(rng);
  }
  for (const auto& set : problem.sets) {
    TrainExample example;
    example.embeddings = &set;
    const std::size_t n = set.sentence_vectors.size();
    for (std::size_t i = 0; i < n; ++i) example.labels.push_back(static_cast<int>(uniform(0, 1)));
    const std::size_t count = uniform(2, max_candidates);
    for (std::size_t c = 0; c < count; ++c) {
      std::vector<std::size_t> order(n);
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      std::shuffle(order.begin(), order.end(), rng);
      order.resize(uniform(1, std::min<std::size_t>(3, n)));
      example.ranked.push_back(make_candidate(order));
    }
    problem.batch.push_back(std::move(example));
  }
  return problem;
}

/// Smallest distance of any hinge argument in the batch from zero.
inline double nearest_kink(const RandomProblem& problem) {
  double nearest = INFINITY;
  const double lambda = problem.model.hyper.lambda;
  for (const auto& example : problem.batch) {
    const ProjectedSet projected = project_all(problem.model, *example.embeddings);
    std::vector<double> cosines;
    for (const auto& candidate : example.ranked) {
      cosines.push_back(cosine(projected.doc, embed_candidate(projected.sentences, candidate)));
    }
    for (std::size_t j = 0; j < cosines.size(); ++j) {
      for (std::size_t k = j + 1; k < cosines.size(); ++k) {
        const double arg = cosines[k] - cosines[j] + lambda * static_cast<double>(k - j);
        nearest = std::min(nearest, std::abs(arg));
      }
    }
  }
  return nearest;
}

/// True when any sentence probability falls in the clamped region.
inline bool touches_clamp(const RandomProblem& problem, double margin = 1e-6) {
  for (const auto& example : problem.batch) {
    for (double p : sentence_probs(problem.model, *example.embeddings)) {
      if (p < kProbEpsilon + margin || p > 1.0 - kProbEpsilon - margin) return true;
    }
  }
  return false;
}

/// |a - b| / max(|a|, |b|, floor). The floor keeps coordinates whose true
/// derivative is near zero from turning finite-difference round-off
/// (about 1e-10 absolute at h = 1e-6) into a large relative error.
inline double relative_error(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

inline constexpr double kGradientFloor = 1e-4;

}  // namespace ordersum::testing
