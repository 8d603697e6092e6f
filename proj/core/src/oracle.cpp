#include "ordersum/oracle.hpp"

#include <algorithm>
#include <optional>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "ordersum/error.hpp"
#include "ordersum/rouge.hpp"

namespace ordersum {
namespace {

using nlohmann::json;

TokenSequence concat_tokens(const std::vector<TokenSequence>& sentences,
                            const std::vector<std::size_t>& order) {
  TokenSequence out;
  for (std::size_t index : order) {
    out.insert(out.end(), sentences[index].begin(), sentences[index].end());
  }
  return out;
}

}  // namespace

OracleLabel greedy_oracle(const Document& doc, std::size_t max_sentences, bool stemming) {
  if (max_sentences == 0) throw Error("max_sentences must be at least 1");
  const auto sentence_tokens = normalize_all(doc.sentence_texts(), stemming);
  const TokenSequence reference = flatten(normalize_all(doc.reference, stemming));

  OracleLabel label;
  label.document_id = doc.id;
  label.y.assign(doc.size(), 0);

  double best_objective = 0.0;
  std::vector<std::size_t> selected;
  while (selected.size() < max_sentences) {
    std::optional<std::size_t> best_index;
    double round_best = best_objective;
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (label.y[i]) continue;
      std::vector<std::size_t> trial = selected;
      trial.insert(std::upper_bound(trial.begin(), trial.end(), i), i);
      const TokenSequence candidate = concat_tokens(sentence_tokens, trial);
      const double objective =
          rouge_n(reference, candidate, 1).f1 + rouge_n(reference, candidate, 2).f1;
      if (objective > round_best) {
        round_best = objective;
        best_index = i;
      }
    }
    if (!best_index) break;
    best_objective = round_best;
    selected.insert(std::upper_bound(selected.begin(), selected.end(), *best_index), *best_index);
    label.y[*best_index] = 1;
  }
  label.selected = selected;
  label.ordered = selected;
  return label;
}

std::vector<std::size_t> order_oracle(const Document& doc,
                                      const std::vector<std::size_t>& selected,
                                      std::size_t permutation_cap, bool stemming) {
  if (selected.size() > permutation_cap) {
    throw Error("selection of " + std::to_string(selected.size()) +
                " sentences exceeds the permutation cap of " + std::to_string(permutation_cap) +
                "; raise --permutation-cap to order it");
  }
  for (std::size_t index : selected) {
    if (index >= doc.size()) throw Error("sentence index out of range in document " + doc.id);
  }
  if (selected.size() <= 1) return selected;

  const auto sentence_tokens = normalize_all(doc.sentence_texts(), stemming);
  const TokenSequence reference = flatten(normalize_all(doc.reference, stemming));

  std::vector<std::size_t> order = selected;
  std::sort(order.begin(), order.end());
  std::vector<std::size_t> best = order;
  double best_f1 = -1.0;
  do {
    const TokenSequence candidate = concat_tokens(sentence_tokens, order);
    const auto lcs = static_cast<double>(lcs_length(reference, candidate));
    const double f1 = RougeScore::from_counts(lcs, static_cast<double>(candidate.size()),
                                              static_cast<double>(reference.size()))
                          .f1;
    // Lexicographic enumeration: strict improvement keeps the smallest sequence.
    if (f1 > best_f1) {
      best_f1 = f1;
      best = order;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

OracleLabel ordered_oracle(const Document& doc, std::size_t max_sentences,
                           std::size_t permutation_cap, bool stemming) {
  OracleLabel label = greedy_oracle(doc, max_sentences, stemming);
  label.ordered = order_oracle(doc, label.selected, permutation_cap, stemming);
  return label;
}

std::vector<std::size_t> lead(const Document& doc, std::size_t count) {
  if (count == 0) throw Error("lead count must be at least 1");
  std::vector<std::size_t> out(std::min(count, doc.size()));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

void write_labels_jsonl(const std::vector<OracleLabel>& labels, std::ostream& out) {
  for (const auto& label : labels) {
    json record;
    record["id"] = label.document_id;
    record["selected"] = label.selected;
    record["ordered"] = label.ordered;
    record["y"] = label.y;
    out << record.dump() << '\n';
  }
}

std::vector<OracleLabel> read_labels_jsonl(std::istream& in) {
  std::vector<OracleLabel> labels;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json record = json::parse(line);
      OracleLabel label;
      label.document_id = record.at("id").get<std::string>();
      label.selected = record.at("selected").get<std::vector<std::size_t>>();
      label.ordered = record.at("ordered").get<std::vector<std::size_t>>();
      label.y = record.at("y").get<std::vector<int>>();
      labels.push_back(std::move(label));
    } catch (const json::exception& e) {
      throw Error("malformed label record at line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return labels;
}

std::vector<OracleLabel> read_labels_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open label file " + path);
  return read_labels_jsonl(in);
}

}  // namespace ordersum
