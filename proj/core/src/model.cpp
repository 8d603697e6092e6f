#include "ordersum/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "ordersum/error.hpp"

namespace ordersum {
namespace {

using nlohmann::json;

constexpr int kCheckpointVersion = 1;

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

void require_length(std::span<const double> v, std::size_t d, const char* what) {
  if (v.size() != d) {
    throw Error(std::string(what) + ": expected length " + std::to_string(d) + ", got " +
                std::to_string(v.size()));
  }
}

// Accumulates d(cos(a, c)) into grad_a and grad_c, scaled by `weight`.
void add_cosine_gradient(std::span<const double> a, std::span<const double> c, double weight,
                         std::span<double> grad_a, std::span<double> grad_c) {
  const double na = norm(a);
  const double nc = norm(c);
  if (na == 0.0 || nc == 0.0) throw Error("degenerate embedding: cosine of a zero-norm vector");
  const double cos = dot(a, c) / (na * nc);
  const double inv = 1.0 / (na * nc);
  for (std::size_t i = 0; i < a.size(); ++i) {
    grad_a[i] += weight * (c[i] * inv - cos * a[i] / (na * na));
    grad_c[i] += weight * (a[i] * inv - cos * c[i] / (nc * nc));
  }
}

// Backpropagates through z = tanh(W v + b) into the parameter gradient.
void add_projection_gradient(std::span<const double> v, std::span<const double> z,
                             std::span<const double> grad_z, Parameters& gradient) {
  const std::size_t d = gradient.d();
  for (std::size_t row = 0; row < d; ++row) {
    const double grad_u = grad_z[row] * (1.0 - z[row] * z[row]);
    if (grad_u == 0.0) continue;
    for (std::size_t col = 0; col < d; ++col) gradient.W(row, col) += grad_u * v[col];
    gradient.b()[row] += grad_u;
  }
}

}  // namespace

Parameters::Parameters(std::size_t d) : d_(d), data_(d * d + 2 * d + 1, 0.0) {}

bool Parameters::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

RerankerModel RerankerModel::identity(std::size_t d, ModelHyper hyper) {
  RerankerModel model{Parameters(d), hyper};
  for (std::size_t i = 0; i < d; ++i) model.params.W(i, i) = 1.0;
  return model;
}

RerankerModel RerankerModel::initialize(std::size_t d, std::uint64_t seed, double scale,
                                        ModelHyper hyper) {
  RerankerModel model = identity(d, hyper);
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& x : model.params.W()) x += scale * normal(engine);
  for (double& x : model.params.w()) x = scale * normal(engine);
  return model;
}

Vector project(const RerankerModel& model, std::span<const double> v) {
  const std::size_t d = model.d();
  require_length(v, d, "project");
  const Parameters& p = model.params;
  Vector out(d);
  for (std::size_t row = 0; row < d; ++row) {
    double u = p.b()[row];
    for (std::size_t col = 0; col < d; ++col) u += p.W(row, col) * v[col];
    out[row] = std::tanh(u);
  }
  return out;
}

ProjectedSet project_all(const RerankerModel& model, const EmbeddingSet& set) {
  if (set.d != model.d()) {
    throw Error("model channel size " + std::to_string(model.d()) +
                " does not match embedding channel size " + std::to_string(set.d));
  }
  ProjectedSet out;
  out.sentences.reserve(set.sentence_vectors.size());
  for (const auto& v : set.sentence_vectors) out.sentences.push_back(project(model, v));
  out.doc = project(model, set.doc_vector);
  return out;
}

double sentence_prob(const RerankerModel& model, std::span<const double> z) {
  require_length(z, model.d(), "sentence_prob");
  return sigmoid(dot(model.params.w(), z) + model.params.c());
}

std::vector<double> sentence_probs(const RerankerModel& model, const EmbeddingSet& set) {
  const ProjectedSet projected = project_all(model, set);
  std::vector<double> probs;
  probs.reserve(projected.sentences.size());
  for (const auto& z : projected.sentences) probs.push_back(sentence_prob(model, z));
  return probs;
}

double loss_sent(std::span<const double> probs, std::span<const int> labels) {
  if (probs.empty() || probs.size() != labels.size()) {
    throw Error("loss_sent needs equal, non-zero numbers of probabilities and labels");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = std::clamp(probs[i], kProbEpsilon, 1.0 - kProbEpsilon);
    total += labels[i] ? std::log(p) : std::log(1.0 - p);
  }
  return -total / static_cast<double>(probs.size());
}

double ranking_score(std::span<const TokenSequence> reference,
                     std::span<const TokenSequence> sentence_tokens,
                     const CandidateSummary& candidate) {
  std::vector<TokenSequence> chosen;
  chosen.reserve(candidate.size());
  for (std::size_t index : candidate.indices) {
    if (index >= sentence_tokens.size()) throw Error("candidate index out of range");
    chosen.push_back(sentence_tokens[index]);
  }
  const TokenSequence ref = flatten(reference);
  const TokenSequence cand = flatten(chosen);
  const double lcs = static_cast<double>(lcs_length(ref, cand));
  return rouge_n(ref, cand, 1).f1 + rouge_n(ref, cand, 2).f1 +
         RougeScore::from_counts(lcs, static_cast<double>(cand.size()),
                                 static_cast<double>(ref.size()))
             .f1;
}

RankedCandidateSet rank_h(std::span<const TokenSequence> reference,
                          std::span<const CandidateSummary> candidates,
                          std::span<const TokenSequence> sentence_tokens) {
  if (candidates.empty()) throw Error("rank_h needs at least one candidate");
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) scores.push_back(ranking_score(reference, sentence_tokens, c));
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  RankedCandidateSet ranked;
  for (std::size_t i : order) {
    ranked.candidates.push_back(candidates[i]);
    ranked.scores.push_back(scores[i]);
  }
  return ranked;
}

double loss_sum(std::span<const double> doc_vec, std::span<const Vector> candidate_vecs,
                double lambda) {
  std::vector<double> cos;
  cos.reserve(candidate_vecs.size());
  for (const auto& v : candidate_vecs) cos.push_back(cosine(doc_vec, v));
  double total = 0.0;
  for (std::size_t j = 0; j < cos.size(); ++j) {
    for (std::size_t k = j + 1; k < cos.size(); ++k) {
      total += std::max(0.0, cos[k] - cos[j] + lambda * static_cast<double>(k - j));
    }
  }
  return total;
}

double batch_loss(const RerankerModel& model, std::span<const TrainExample> batch) {
  if (batch.empty()) throw Error("empty batch");
  double total = 0.0;
  for (const auto& example : batch) {
    const ProjectedSet projected = project_all(model, *example.embeddings);
    std::vector<double> probs;
    for (const auto& z : projected.sentences) probs.push_back(sentence_prob(model, z));
    total += loss_sent(probs, example.labels);
    if (!example.ranked.empty()) {
      std::vector<Vector> vecs;
      for (const auto& c : example.ranked) vecs.push_back(embed_candidate(projected.sentences, c));
      total += loss_sum(projected.doc, vecs, model.hyper.lambda);
    }
  }
  return total / static_cast<double>(batch.size());
}

LossAndGradient grad(const RerankerModel& model, std::span<const TrainExample> batch) {
  if (batch.empty()) throw Error("empty batch");
  const std::size_t d = model.d();
  const double lambda = model.hyper.lambda;
  LossAndGradient result;
  result.gradient = Parameters(d);
  Parameters& g = result.gradient;

  for (const auto& example : batch) {
    const EmbeddingSet& set = *example.embeddings;
    const ProjectedSet projected = project_all(model, set);
    const std::size_t n = projected.sentences.size();
    if (example.labels.size() != n) throw Error("label count does not match sentence count");

    std::vector<Vector> grad_sentences(n, Vector(d, 0.0));
    Vector grad_doc(d, 0.0);

    // Extraction loss.
    std::vector<double> probs(n);
    for (std::size_t i = 0; i < n; ++i) probs[i] = sentence_prob(model, projected.sentences[i]);
    result.loss_sent += loss_sent(probs, example.labels);
    for (std::size_t i = 0; i < n; ++i) {
      if (probs[i] <= kProbEpsilon || probs[i] >= 1.0 - kProbEpsilon) continue;
      const double grad_logit =
          (probs[i] - static_cast<double>(example.labels[i])) / static_cast<double>(n);
      const auto w = model.params.w();
      for (std::size_t e = 0; e < d; ++e) {
        g.w()[e] += grad_logit * projected.sentences[i][e];
        grad_sentences[i][e] += grad_logit * w[e];
      }
      g.c() += grad_logit;
    }

    // Ranking loss.
    const std::size_t m = example.ranked.size();
    if (m > 0) {
      std::vector<Vector> vecs(m);
      std::vector<double> cos(m);
      for (std::size_t j = 0; j < m; ++j) {
        vecs[j] = embed_candidate(projected.sentences, example.ranked[j]);
        cos[j] = cosine(projected.doc, vecs[j]);
      }
      std::vector<double> grad_cos(m, 0.0);
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = j + 1; k < m; ++k) {
          const double hinge = cos[k] - cos[j] + lambda * static_cast<double>(k - j);
          if (hinge > 0.0) {
            result.loss_sum += hinge;
            grad_cos[k] += 1.0;
            grad_cos[j] -= 1.0;
          }
        }
      }
      for (std::size_t j = 0; j < m; ++j) {
        if (grad_cos[j] == 0.0) continue;
        const CandidateSummary& candidate = example.ranked[j];
        const std::size_t r = candidate.size();
        Vector grad_pooled(d, 0.0);
        add_cosine_gradient(projected.doc, vecs[j], grad_cos[j], grad_doc, grad_pooled);
        // Pooling: output[delta] averages intermediate[r*delta + gamma]; the
        // intermediate position p belongs to sentence p / d, channel p % d.
        const double scale = 1.0 / static_cast<double>(r);
        for (std::size_t delta = 0; delta < d; ++delta) {
          for (std::size_t gamma = 0; gamma < r; ++gamma) {
            const std::size_t pos = r * delta + gamma;
            grad_sentences[candidate.indices[pos / d]][pos % d] += grad_pooled[delta] * scale;
          }
        }
      }
    }

    for (std::size_t i = 0; i < n; ++i) {
      add_projection_gradient(set.sentence_vectors[i], projected.sentences[i], grad_sentences[i], g);
    }
    add_projection_gradient(set.doc_vector, projected.doc, grad_doc, g);
  }

  const double scale = 1.0 / static_cast<double>(batch.size());
  for (double& x : g.flat()) x *= scale;
  result.loss_sent *= scale;
  result.loss_sum *= scale;
  result.loss = result.loss_sent + result.loss_sum;
  return result;
}

double lr_at(std::size_t step, double lr0, std::size_t warmup) {
  if (step == 0) throw Error("learning-rate schedule is defined for step >= 1");
  if (warmup == 0) throw Error("warmup must be positive");
  const auto s = static_cast<double>(step);
  const auto w = static_cast<double>(warmup);
  return lr0 * std::min(1.0 / std::sqrt(s), s / (w * std::sqrt(w)));
}

std::string checkpoint_to_json(const Checkpoint& checkpoint) {
  const Parameters& p = checkpoint.model.params;
  json record;
  record["format"] = "ordersum-checkpoint";
  record["version"] = kCheckpointVersion;
  record["d"] = p.d();
  record["W"] = std::vector<double>(p.W().begin(), p.W().end());
  record["b"] = std::vector<double>(p.b().begin(), p.b().end());
  record["w"] = std::vector<double>(p.w().begin(), p.w().end());
  record["c"] = p.c();
  record["hyper"] = {{"lambda", checkpoint.model.hyper.lambda},
                     {"lr0", checkpoint.model.hyper.lr0},
                     {"warmup", checkpoint.model.hyper.warmup}};
  record["step"] = checkpoint.step;
  if (checkpoint.toy_seed) record["toy_seed"] = *checkpoint.toy_seed;
  return record.dump();
}

Checkpoint checkpoint_from_json(const std::string& text) {
  try {
    const json record = json::parse(text);
    if (record.value("format", "") != "ordersum-checkpoint") throw Error("not an ordersum checkpoint");
    if (record.at("version").get<int>() != kCheckpointVersion) {
      throw Error("unsupported checkpoint version " + record.at("version").dump());
    }
    const auto d = record.at("d").get<std::size_t>();
    Checkpoint checkpoint;
    checkpoint.model.params = Parameters(d);
    Parameters& p = checkpoint.model.params;
    auto fill = [](std::span<double> dst, const json& src, const char* name) {
      const auto values = src.get<std::vector<double>>();
      if (values.size() != dst.size()) throw Error(std::string("checkpoint field ") + name + " has wrong length");
      std::copy(values.begin(), values.end(), dst.begin());
    };
    fill(p.W(), record.at("W"), "W");
    fill(p.b(), record.at("b"), "b");
    fill(p.w(), record.at("w"), "w");
    p.c() = record.at("c").get<double>();
    const json& hyper = record.at("hyper");
    checkpoint.model.hyper.lambda = hyper.at("lambda").get<double>();
    checkpoint.model.hyper.lr0 = hyper.at("lr0").get<double>();
    checkpoint.model.hyper.warmup = hyper.at("warmup").get<std::size_t>();
    checkpoint.step = record.at("step").get<std::size_t>();
    if (record.contains("toy_seed")) checkpoint.toy_seed = record.at("toy_seed").get<std::uint64_t>();
    if (!p.all_finite()) throw Error("checkpoint holds non-finite parameters");
    return checkpoint;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write checkpoint " + path);
  out << checkpoint_to_json(checkpoint) << '\n';
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open checkpoint " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return checkpoint_from_json(buffer.str());
}

}  // namespace ordersum
