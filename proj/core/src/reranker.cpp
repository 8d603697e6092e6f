#include "ordersum/reranker.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "ordersum/error.hpp"

namespace ordersum {

std::string join_sentences(const Document& doc, std::span<const std::size_t> indices) {
  std::string out;
  for (std::size_t index : indices) {
    if (index >= doc.size()) throw Error("sentence index out of range in document " + doc.id);
    if (!out.empty()) out += ' ';
    out += doc.sentences[index].text;
  }
  return out;
}

SummaryResult make_result(const Document& doc, std::vector<std::size_t> indices, double similarity) {
  SummaryResult result;
  result.document_id = doc.id;
  result.text = join_sentences(doc, indices);
  result.chosen = make_candidate(std::move(indices));
  result.similarity = similarity;
  return result;
}

SummaryResult summarize(const Document& doc, const RerankerModel& model,
                        const EmbeddingSet& embeddings, const CandidateConfig& config,
                        bool keep_scores) {
  if (embeddings.d != model.d()) {
    throw Error("model channel size " + std::to_string(model.d()) +
                " does not match embedding channel size " + std::to_string(embeddings.d));
  }
  if (embeddings.sentence_vectors.size() != doc.size()) {
    throw Error("embedding sentence count does not match document " + doc.id);
  }
  CandidateConfig effective = config;
  effective.k = std::min(config.k, doc.size());
  std::erase_if(effective.sizes, [&](std::size_t r) { return r > effective.k; });
  if (effective.sizes.empty()) {
    throw Error("document too short for configured candidate sizes: " + doc.id + " has " +
                std::to_string(doc.size()) + " sentences");
  }

  const ProjectedSet projected = project_all(model, embeddings);
  std::vector<double> probs;
  probs.reserve(doc.size());
  for (const auto& z : projected.sentences) probs.push_back(sentence_prob(model, z));
  const auto key = select_key_sentences(probs, effective.k);
  const auto candidates = generate(effective, key);

  SummaryResult result;
  result.document_id = doc.id;
  std::size_t best = 0;
  double best_similarity = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double similarity = cosine(projected.doc, embed_candidate(projected.sentences, candidates[i]));
    if (keep_scores) result.all_scores.push_back({candidates[i], similarity});
    if (i == 0 || similarity > best_similarity) {
      best = i;
      best_similarity = similarity;
    }
  }
  result.chosen = candidates[best];
  result.similarity = best_similarity;
  result.text = join_sentences(doc, result.chosen.indices);
  return result;
}

CandidateSummary reorder_by_extractor(const SummaryResult& result, std::span<const double> probs) {
  std::vector<std::size_t> indices = result.chosen.indices;
  for (std::size_t index : indices) {
    if (index >= probs.size()) throw Error("probabilities do not cover document " + result.document_id);
  }
  std::stable_sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
    if (probs[a] != probs[b]) return probs[a] > probs[b];
    return a < b;
  });
  return make_candidate(std::move(indices));
}

void write_results_jsonl(std::span<const SummaryResult> results, std::ostream& out) {
  for (const auto& result : results) {
    nlohmann::json record;
    record["id"] = result.document_id;
    record["indices"] = result.chosen.indices;
    record["summary"] = result.text;
    record["similarity"] = result.similarity;
    if (!result.all_scores.empty()) {
      nlohmann::json scores = nlohmann::json::array();
      for (const auto& scored : result.all_scores) {
        scores.push_back({{"indices", scored.candidate.indices}, {"similarity", scored.similarity}});
      }
      record["candidates"] = std::move(scores);
    }
    out << record.dump() << '\n';
  }
}

std::vector<SummaryResult> read_results_jsonl(const std::string& path, const DatasetSplit& split) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open output file " + path);
  std::vector<SummaryResult> results;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto record = nlohmann::json::parse(line);
      const auto id = record.at("id").get<std::string>();
      const Document* doc = split.find(id);
      if (!doc) throw Error("output id " + id + " is not in split " + split.name);
      results.push_back(make_result(*doc, record.at("indices").get<std::vector<std::size_t>>(),
                                    record.value("similarity", 0.0)));
    } catch (const nlohmann::json::exception& e) {
      throw Error("malformed output record at line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return results;
}

}  // namespace ordersum
