#include "ordersum/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "ordersum/error.hpp"
#include "ordersum/reranker.hpp"
#include "ordersum/rouge.hpp"

namespace ordersum {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct PreparedDocument {
  const Document* doc = nullptr;
  const EmbeddingSet* embeddings = nullptr;
  std::vector<int> labels;
  std::vector<TokenSequence> sentence_tokens;
  std::vector<TokenSequence> reference_tokens;
  std::map<std::vector<std::size_t>, double> h_cache;
};

std::vector<PreparedDocument> prepare(const TrainingInputs& inputs, const TrainConfig& config) {
  if (!inputs.train || !inputs.labels || !inputs.embeddings) {
    throw Error("training needs a corpus, labels, and embeddings");
  }
  std::map<std::string_view, const OracleLabel*> labels;
  for (const auto& label : *inputs.labels) labels.emplace(label.document_id, &label);

  std::vector<PreparedDocument> out;
  out.reserve(inputs.train->size());
  for (const auto& doc : inputs.train->documents) {
    auto label = labels.find(doc.id);
    if (label == labels.end()) throw Error("no label for training document " + doc.id);
    if (label->second->y.size() != doc.size()) throw Error("label length mismatch for " + doc.id);
    auto emb = inputs.embeddings->find(doc.id);
    if (emb == inputs.embeddings->end()) throw Error("no embeddings for training document " + doc.id);
    PreparedDocument prepared;
    prepared.doc = &doc;
    prepared.embeddings = &emb->second;
    prepared.labels = label->second->y;
    prepared.sentence_tokens = normalize_all(doc.sentence_texts(), config.stemming);
    prepared.reference_tokens = normalize_all(doc.reference, config.stemming);
    out.push_back(std::move(prepared));
  }
  if (out.empty()) throw Error("training corpus is empty");
  return out;
}

// Candidates for one document ranked by H, or an empty list when the
// document is too short for every configured size.
std::vector<CandidateSummary> ranked_candidates(PreparedDocument& prepared,
                                                const RerankerModel& model,
                                                const TrainConfig& config, std::uint64_t seed) {
  const std::size_t n = prepared.doc->size();
  CandidateConfig effective = config.candidates;
  effective.k = std::min(effective.k, n);
  std::erase_if(effective.sizes, [&](std::size_t r) { return r > effective.k; });
  if (effective.sizes.empty()) return {};

  const auto probs = sentence_probs(model, *prepared.embeddings);
  const auto key = select_key_sentences(probs, effective.k);
  auto all = generate(effective, key);
  if (effective.mode == CandidateMode::kPermutation) all = anchor_sample(all, config.factor, seed);

  std::vector<double> scores;
  scores.reserve(all.size());
  for (const auto& candidate : all) {
    auto [it, inserted] = prepared.h_cache.try_emplace(candidate.indices, 0.0);
    if (inserted) {
      it->second = ranking_score(prepared.reference_tokens, prepared.sentence_tokens, candidate);
    }
    scores.push_back(it->second);
  }
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<CandidateSummary> ranked;
  ranked.reserve(all.size());
  for (std::size_t i : order) ranked.push_back(std::move(all[i]));
  return ranked;
}

}  // namespace

AdamOptimizer::AdamOptimizer(std::size_t parameter_count, double beta1, double beta2,
                             double epsilon, double weight_decay)
    : beta1_(beta1),
      beta2_(beta2),
      epsilon_(epsilon),
      weight_decay_(weight_decay),
      m_(parameter_count, 0.0),
      v_(parameter_count, 0.0) {}

void AdamOptimizer::step(std::span<double> params, std::span<const double> gradient, double lr) {
  if (params.size() != m_.size() || gradient.size() != m_.size()) {
    throw Error("optimizer parameter count mismatch");
  }
  ++t_;
  const double correction1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double correction2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * gradient[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * gradient[i] * gradient[i];
    const double m_hat = m_[i] / correction1;
    const double v_hat = v_[i] / correction2;
    params[i] -= lr * (m_hat / (std::sqrt(v_hat) + epsilon_) + weight_decay_ * params[i]);
  }
}

ValidationRecord validate(const RerankerModel& model, const DatasetSplit& split,
                          const EmbeddingMap& embeddings, const CandidateConfig& config,
                          bool stemming) {
  ValidationRecord record;
  const std::size_t min_size = *std::min_element(config.sizes.begin(), config.sizes.end());
  std::size_t count = 0;
  for (const auto& doc : split.documents) {
    if (doc.size() < min_size) continue;
    auto emb = embeddings.find(doc.id);
    if (emb == embeddings.end()) throw Error("no embeddings for validation document " + doc.id);
    const SummaryResult result = summarize(doc, model, emb->second, config);
    std::vector<TokenSequence> chosen;
    for (std::size_t index : result.chosen.indices) {
      chosen.push_back(normalize(doc.sentences[index].text, stemming));
    }
    const auto reference = normalize_all(doc.reference, stemming);
    const RougeReport report = rouge_report(reference, chosen);
    record.r1 += report.r1.f1;
    record.r2 += report.r2.f1;
    record.rl_full += report.rl_full.f1;
    ++count;
  }
  if (count > 0) {
    record.r1 /= static_cast<double>(count);
    record.r2 /= static_cast<double>(count);
    record.rl_full /= static_cast<double>(count);
  }
  return record;
}

TrainResult train(const TrainingInputs& inputs, const TrainConfig& config) {
  if (!inputs.embeddings || inputs.embeddings->empty()) throw Error("training needs embeddings");
  const std::size_t d = inputs.embeddings->begin()->second.d;
  return train(inputs, config, RerankerModel::initialize(d, config.seed, config.init_scale));
}

TrainResult train(const TrainingInputs& inputs, const TrainConfig& config, RerankerModel initial) {
  config.candidates.validate();
  if (config.batch_size == 0) throw Error("batch size must be positive");
  if (config.factor == 0) throw Error("anchor sampling factor must be positive");
  auto prepared = prepare(inputs, config);
  for (const auto& p : prepared) {
    if (p.embeddings->d != initial.d()) throw Error("model and embedding channel sizes differ");
  }

  TrainResult result;
  result.model = std::move(initial);
  result.model.hyper.lambda = config.lambda;
  result.model.hyper.warmup = config.warmup;
  result.state.seed = config.seed;

  std::mt19937_64 shuffle_engine(splitmix64(config.seed));
  std::vector<std::size_t> order(prepared.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t cursor = order.size();

  auto next_document = [&]() -> std::size_t {
    if (cursor == order.size()) {
      for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[static_cast<std::size_t>(shuffle_engine() % i)]);
      }
      cursor = 0;
    }
    return order[cursor++];
  };

  const bool validating = config.validation_interval > 0 && inputs.valid && inputs.valid_embeddings;

  for (int phase = 1; phase <= 2; ++phase) {
    const std::size_t steps = phase == 1 ? config.phase1_steps : config.phase2_steps;
    const double lr0 = phase == 1 ? config.lr0_phase1 : config.lr0_phase2;
    result.model.hyper.lr0 = lr0;
    result.state.phase = phase;
    AdamOptimizer optimizer(result.model.params.size(), config.beta1, config.beta2,
                            config.adam_epsilon, config.weight_decay);

    for (std::size_t step = 1; step <= steps; ++step) {
      const std::size_t global_step = result.state.step + 1;
      std::vector<TrainExample> batch;
      batch.reserve(config.batch_size);
      for (std::size_t b = 0; b < config.batch_size; ++b) {
        const std::size_t doc_index = next_document();
        PreparedDocument& doc = prepared[doc_index];
        TrainExample example;
        example.embeddings = doc.embeddings;
        example.labels = doc.labels;
        if (phase == 2) {
          const std::uint64_t seed =
              splitmix64(config.seed ^ splitmix64(global_step * 0x10001ULL + b) ^ doc_index);
          example.ranked = ranked_candidates(doc, result.model, config, seed);
        }
        batch.push_back(std::move(example));
      }

      const LossAndGradient lg = grad(result.model, batch);
      if (!std::isfinite(lg.loss)) {
        throw Error("non-finite loss at step " + std::to_string(global_step));
      }
      optimizer.step(result.model.params.flat(), lg.gradient.flat(),
                     lr_at(step, lr0, config.warmup));
      if (!result.model.params.all_finite()) {
        throw Error("non-finite parameters after step " + std::to_string(global_step));
      }
      result.state.step = global_step;

      if (validating && global_step % config.validation_interval == 0) {
        ValidationRecord record = validate(result.model, *inputs.valid, *inputs.valid_embeddings,
                                           config.candidates, config.stemming);
        record.step = global_step;
        record.phase = phase;
        result.state.metrics_log.push_back(record);
      }
    }
    if (phase == 1) result.phase1_model = result.model;
  }
  return result;
}

}  // namespace ordersum
